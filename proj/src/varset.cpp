#include "sosround/varset.hpp"

#include <map>
#include <mutex>
#include <stdexcept>

namespace sosround {

std::vector<int> VarSet::indices() const {
    std::vector<int> out;
    std::uint64_t b = bits;
    while (b) {
        out.push_back(std::countr_zero(b) + 1);
        b &= b - 1;
    }
    return out;
}

std::string VarSet::to_string() const {
    if (empty()) return "-";
    std::string s;
    for (int i : indices()) {
        if (!s.empty()) s += ' ';
        s += std::to_string(i);
    }
    return s;
}

std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    std::uint64_t r = 1;
    for (int j = 1; j <= k; ++j) r = r * static_cast<std::uint64_t>(n - k + j) / static_cast<std::uint64_t>(j);
    return r;
}

std::vector<VarSet> subsets_up_to(int n, int k) {
    if (n < 0 || n > 64) throw std::invalid_argument("subsets_up_to: n must be in [0, 64]");
    if (k > n) k = n;
    std::vector<VarSet> out;
    std::vector<int> c;
    for (int s = 0; s <= k; ++s) {
        c.resize(s);
        for (int j = 0; j < s; ++j) c[j] = j + 1;
        while (true) {
            VarSet v;
            for (int x : c) v = v.with(x);
            out.push_back(v);
            int j = s - 1;
            while (j >= 0 && c[j] == n - s + j + 1) --j;
            if (j < 0) break;
            ++c[j];
            for (int q = j + 1; q < s; ++q) c[q] = c[q - 1] + 1;
        }
    }
    return out;
}

MomentIndex::MomentIndex(int n, int d) : n_(n), d_(d < n ? d : n) {
    sets_ = subsets_up_to(n, d_);
    pos_.reserve(sets_.size() * 2);
    for (int k = 0; k < static_cast<int>(sets_.size()); ++k) pos_.emplace(sets_[k], k);
    size_offset_.assign(d_ + 2, 0);
    for (VarSet s : sets_) size_offset_[s.size() + 1]++;
    for (int j = 1; j < d_ + 2; ++j) size_offset_[j] += size_offset_[j - 1];
}

int MomentIndex::count_up_to(int k) const {
    if (k < 0) return 0;
    if (k >= d_) return size();
    return size_offset_[k + 1];
}

std::shared_ptr<const MomentIndex> MomentIndex::get(int n, int d) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::shared_ptr<const MomentIndex>> cache;
    int dd = d < n ? d : n;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(n, dd);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto idx = std::make_shared<const MomentIndex>(n, dd);
    cache.emplace(key, idx);
    return idx;
}

}  // namespace sosround
