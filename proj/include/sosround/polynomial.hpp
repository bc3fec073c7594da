#pragma once

#include <map>
#include <string>

#include "sosround/varset.hpp"

namespace sosround {

// Multilinear polynomial over ±1 variables X_1..X_n (X_i^2 = 1 is applied on multiplication).
class MultilinearPoly {
public:
    using Terms = std::map<VarSet, double, CanonicalLess>;

    MultilinearPoly() = default;
    explicit MultilinearPoly(int n) : n_(n) {}

    static MultilinearPoly constant(int n, double c);
    static MultilinearPoly var(int n, int i);
    static MultilinearPoly monomial(int n, VarSet s, double c = 1.0);
    // X_phi = prod_{i in S} (1 + phi_i X_i); phi given as a bitmask over S: bit set -> -1.
    static MultilinearPoly indicator(int n, VarSet s, VarSet negative);

    int n() const { return n_; }
    const Terms& terms() const { return terms_; }
    int degree() const;  // -1 for the zero polynomial
    bool is_zero() const { return terms_.empty(); }
    double coeff(VarSet s) const;
    void add_term(VarSet s, double c);

    MultilinearPoly& operator+=(const MultilinearPoly& o);
    MultilinearPoly& operator-=(const MultilinearPoly& o);
    MultilinearPoly& operator*=(double c);
    friend MultilinearPoly operator+(MultilinearPoly a, const MultilinearPoly& b) { return a += b; }
    friend MultilinearPoly operator-(MultilinearPoly a, const MultilinearPoly& b) { return a -= b; }
    friend MultilinearPoly operator*(MultilinearPoly a, double c) { return a *= c; }
    friend MultilinearPoly operator*(double c, MultilinearPoly a) { return a *= c; }
    friend MultilinearPoly operator*(const MultilinearPoly& a, const MultilinearPoly& b);
    friend MultilinearPoly operator-(MultilinearPoly a) { return a *= -1.0; }
    bool operator==(const MultilinearPoly& o) const { return n_ == o.n_ && terms_ == o.terms_; }

    // Evaluate at a ±1 point (x[i] for i = 1..n, index 0 unused).
    double at(const std::vector<int>& x) const;
    std::string to_string() const;

private:
    int n_ = 0;
    Terms terms_;
};

}  // namespace sosround
