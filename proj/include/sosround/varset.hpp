#pragma once

#include <bit>
#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

namespace sosround {

// Subset of variables {1..n}, n <= 64. Bit (i-1) stands for variable i.
struct VarSet {
    std::uint64_t bits = 0;

    constexpr VarSet() = default;
    constexpr explicit VarSet(std::uint64_t b) : bits(b) {}

    static VarSet of(std::initializer_list<int> vars) {
        VarSet s;
        for (int v : vars) s = s.with(v);
        return s;
    }
    static constexpr VarSet single(int i) { return VarSet(std::uint64_t{1} << (i - 1)); }
    static constexpr VarSet full(int n) {
        return VarSet(n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1);
    }

    constexpr int size() const { return std::popcount(bits); }
    constexpr bool empty() const { return bits == 0; }
    constexpr bool contains(int i) const { return (bits >> (i - 1)) & 1u; }
    constexpr VarSet with(int i) const { return VarSet(bits | (std::uint64_t{1} << (i - 1))); }
    constexpr VarSet without(int i) const { return VarSet(bits & ~(std::uint64_t{1} << (i - 1))); }
    constexpr VarSet operator^(VarSet o) const { return VarSet(bits ^ o.bits); }
    constexpr VarSet operator|(VarSet o) const { return VarSet(bits | o.bits); }
    constexpr VarSet operator&(VarSet o) const { return VarSet(bits & o.bits); }
    constexpr bool operator==(const VarSet&) const = default;
    constexpr bool subset_of(VarSet o) const { return (bits & ~o.bits) == 0; }
    // Largest index present, 0 for the empty set.
    constexpr int max_var() const { return bits ? 64 - std::countl_zero(bits) : 0; }

    std::vector<int> indices() const;
    std::string to_string() const;  // "1 3 4", or "-" for the empty set
};

// Canonical order: by size, then lexicographic on the sorted index lists.
struct CanonicalLess {
    constexpr bool operator()(VarSet a, VarSet b) const {
        int sa = a.size(), sb = b.size();
        if (sa != sb) return sa < sb;
        std::uint64_t x = a.bits ^ b.bits;
        if (!x) return false;
        return (a.bits & (x & (~x + 1))) != 0;
    }
};

struct VarSetHash {
    std::size_t operator()(VarSet s) const noexcept {
        std::uint64_t z = s.bits + 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return static_cast<std::size_t>(z ^ (z >> 31));
    }
};

// All subsets of {1..n} of size <= k, in canonical order.
std::vector<VarSet> subsets_up_to(int n, int k);

// Every subset T of s (including empty and s itself), in increasing bit order.
template <class F>
void for_each_subset(VarSet s, F&& f) {
    std::uint64_t t = 0;
    while (true) {
        f(VarSet(t));
        if (t == s.bits) break;
        t = (t - s.bits) & s.bits;
    }
}

// Dense index of all subsets of size <= d over n variables. Shared and immutable.
class MomentIndex {
public:
    static std::shared_ptr<const MomentIndex> get(int n, int d);

    int n() const { return n_; }
    int d() const { return d_; }
    int size() const { return static_cast<int>(sets_.size()); }
    VarSet at(int k) const { return sets_[k]; }
    const std::vector<VarSet>& sets() const { return sets_; }
    // -1 when absent.
    int find(VarSet s) const {
        auto it = pos_.find(s);
        return it == pos_.end() ? -1 : it->second;
    }
    // Number of subsets of size <= k (prefix length in canonical order).
    int count_up_to(int k) const;

    MomentIndex(int n, int d);

private:
    int n_, d_;
    std::vector<VarSet> sets_;
    std::vector<int> size_offset_;
    std::unordered_map<VarSet, int, VarSetHash> pos_;
};

std::uint64_t binomial(int n, int k);

}  // namespace sosround
