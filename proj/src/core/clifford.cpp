#include "clifford.hpp"

#include <bit>
#include <cmath>

namespace dirac2d {

Multivector Multivector::grade(int j) const {
    Multivector g(dim_);
    for (unsigned m = 0; m < unsigned(size()); ++m)
        if (std::popcount(m) == j) g.c_[m] = c_[m];
    return g;
}

Multivector Multivector::operator+(const Multivector& o) const {
    if (dim_ != o.dim_) throw std::invalid_argument("Multivector: dimension mismatch");
    Multivector r(dim_);
    for (int m = 0; m < size(); ++m) r.c_[m] = c_[m] + o.c_[m];
    return r;
}

Multivector Multivector::operator-(const Multivector& o) const {
    if (dim_ != o.dim_) throw std::invalid_argument("Multivector: dimension mismatch");
    Multivector r(dim_);
    for (int m = 0; m < size(); ++m) r.c_[m] = c_[m] - o.c_[m];
    return r;
}

Multivector Multivector::operator*(Complex s) const {
    Multivector r(dim_);
    for (int m = 0; m < size(); ++m) r.c_[m] = c_[m] * s;
    return r;
}

double Multivector::norm() const {
    double n2 = 0;
    for (int m = 0; m < size(); ++m) n2 += std::norm(c_[m]);
    return std::sqrt(n2);
}

int perm_sign(unsigned s, unsigned t) {
    // Count inversions: pairs (i in s, j in t) with i > j.
    int inv = 0;
    for (unsigned i = 0; i < 8; ++i) {
        if (!(s & (1u << i))) continue;
        // elements of t strictly below i
        inv += std::popcount(t & ((1u << i) - 1u));
    }
    return (inv & 1) ? -1 : 1;
}

namespace {

template <class Rule>
Multivector bilinear(const Multivector& u, const Multivector& w, Rule rule) {
    if (u.dim() != w.dim()) throw std::invalid_argument("Multivector: dimension mismatch");
    Multivector r(u.dim());
    const int n = u.size();
    for (unsigned s = 0; s < unsigned(n); ++s) {
        if (u.at(s) == 0.0) continue;
        for (unsigned t = 0; t < unsigned(n); ++t) {
            if (w.at(t) == 0.0) continue;
            rule(r, s, t, u.at(s) * w.at(t));
        }
    }
    return r;
}

}  // namespace

Multivector wedge(const Multivector& u, const Multivector& w) {
    return bilinear(u, w, [](Multivector& r, unsigned s, unsigned t, Complex c) {
        if (s & t) return;  // repeated index
        r.at(s | t) += double(perm_sign(s, t)) * c;
    });
}

Multivector lcontract(const Multivector& u, const Multivector& w) {
    return bilinear(u, w, [](Multivector& r, unsigned s, unsigned t, Complex c) {
        if ((s & t) != s) return;  // s not a subset of t
        unsigned rest = t & ~s;
        r.at(rest) += double(perm_sign(s, rest)) * c;
    });
}

Multivector clifford_mul(const Multivector& u, const Multivector& w) {
    return bilinear(u, w, [](Multivector& r, unsigned s, unsigned t, Complex c) {
        r.at(s ^ t) += double(perm_sign(s, t)) * c;
    });
}

Multivector hodge_star(const Multivector& w) {
    // *w = w ⌟ e_{1..n}
    unsigned full = (1u << w.dim()) - 1u;
    return lcontract(w, Multivector::basis(w.dim(), full));
}

Multivector involution(const Multivector& w) {
    Multivector r(w.dim());
    for (unsigned m = 0; m < unsigned(w.size()); ++m)
        r.at(m) = (std::popcount(m) & 1) ? -w.at(m) : w.at(m);
    return r;
}

}  // namespace dirac2d
