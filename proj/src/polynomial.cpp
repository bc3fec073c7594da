#include "sosround/polynomial.hpp"

#include <sstream>
#include <stdexcept>

namespace sosround {

MultilinearPoly MultilinearPoly::constant(int n, double c) {
    MultilinearPoly p(n);
    p.add_term(VarSet{}, c);
    return p;
}

MultilinearPoly MultilinearPoly::var(int n, int i) {
    if (i < 1 || i > n) throw std::out_of_range("variable index out of range");
    return monomial(n, VarSet::single(i));
}

MultilinearPoly MultilinearPoly::monomial(int n, VarSet s, double c) {
    MultilinearPoly p(n);
    p.add_term(s, c);
    return p;
}

MultilinearPoly MultilinearPoly::indicator(int n, VarSet s, VarSet negative) {
    MultilinearPoly p(n);
    for_each_subset(s, [&](VarSet t) {
        double sign = ((t & negative).size() % 2) ? -1.0 : 1.0;
        p.add_term(t, sign);
    });
    return p;
}

int MultilinearPoly::degree() const {
    if (terms_.empty()) return -1;
    return terms_.rbegin()->first.size();
}

double MultilinearPoly::coeff(VarSet s) const {
    auto it = terms_.find(s);
    return it == terms_.end() ? 0.0 : it->second;
}

void MultilinearPoly::add_term(VarSet s, double c) {
    if (s.max_var() > n_) throw std::out_of_range("monomial uses a variable beyond n");
    if (c == 0.0) return;
    auto [it, inserted] = terms_.emplace(s, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0.0) terms_.erase(it);
    }
}

MultilinearPoly& MultilinearPoly::operator+=(const MultilinearPoly& o) {
    if (o.n_ > n_) n_ = o.n_;
    for (const auto& [s, c] : o.terms_) add_term(s, c);
    return *this;
}

MultilinearPoly& MultilinearPoly::operator-=(const MultilinearPoly& o) {
    if (o.n_ > n_) n_ = o.n_;
    for (const auto& [s, c] : o.terms_) add_term(s, -c);
    return *this;
}

MultilinearPoly& MultilinearPoly::operator*=(double c) {
    if (c == 0.0) {
        terms_.clear();
        return *this;
    }
    for (auto& [s, v] : terms_) v *= c;
    return *this;
}

MultilinearPoly operator*(const MultilinearPoly& a, const MultilinearPoly& b) {
    MultilinearPoly p(a.n_ > b.n_ ? a.n_ : b.n_);
    for (const auto& [sa, ca] : a.terms_)
        for (const auto& [sb, cb] : b.terms_) p.add_term(sa ^ sb, ca * cb);
    return p;
}

double MultilinearPoly::at(const std::vector<int>& x) const {
    double total = 0.0;
    for (const auto& [s, c] : terms_) {
        int sign = 1;
        for (int i : s.indices()) sign *= x.at(i);
        total += c * sign;
    }
    return total;
}

std::string MultilinearPoly::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [s, c] : terms_) {
        if (!first) os << (c < 0 ? " - " : " + ");
        else if (c < 0) os << "-";
        first = false;
        double a = c < 0 ? -c : c;
        if (s.empty()) {
            os << a;
            continue;
        }
        if (a != 1.0) os << a << "*";
        bool f2 = true;
        for (int i : s.indices()) {
            if (!f2) os << "*";
            os << "X" << i;
            f2 = false;
        }
    }
    return os.str();
}

}  // namespace sosround
