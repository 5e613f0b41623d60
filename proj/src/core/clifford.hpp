#ifndef DIRAC2D_CLIFFORD_HPP
#define DIRAC2D_CLIFFORD_HPP

#include <array>
#include <complex>
#include <cstdint>
#include <stdexcept>

namespace dirac2d {

using Complex = std::complex<double>;

/// Dense multivector of the exterior algebra over R^2 or R^3 with complex
/// coefficients. Basis elements e_s are indexed by subsets s of {1..dim},
/// encoded as bitmasks (bit i-1 set <=> i in s), so there are 2^dim
/// coefficients. Grade of e_s = popcount(s).
class Multivector {
public:
    explicit Multivector(int dim) : dim_(dim), c_{} {
        if (dim != 2 && dim != 3)
            throw std::invalid_argument("Multivector: dim must be 2 or 3");
    }

    static Multivector basis(int dim, unsigned mask) {
        Multivector m(dim);
        m.at(mask) = 1.0;
        return m;
    }
    static Multivector scalar(int dim, Complex a) { return basis(dim, 0u) * a; }

    int dim() const { return dim_; }
    int size() const { return 1 << dim_; }

    Complex& at(unsigned mask) { check(mask); return c_[mask]; }
    const Complex& at(unsigned mask) const { check(mask); return c_[mask]; }

    /// Sum of the terms whose index set has exactly j elements.
    Multivector grade(int j) const;

    Multivector operator+(const Multivector& o) const;
    Multivector operator-(const Multivector& o) const;
    Multivector operator*(Complex s) const;

    double norm() const;  // l2 norm of the coefficient vector

private:
    void check(unsigned mask) const {
        if (mask >= unsigned(1 << dim_))
            throw std::out_of_range("Multivector: bad basis index");
    }
    int dim_;
    std::array<Complex, 8> c_;
};

/// Permutation sign eps(s,t): parity of the number of pairs (i,j), i in s,
/// j in t, with i > j. This is the sign that sorts the concatenation s,t.
int perm_sign(unsigned s, unsigned t);

Multivector wedge(const Multivector& u, const Multivector& w);
Multivector lcontract(const Multivector& u, const Multivector& w);
Multivector clifford_mul(const Multivector& u, const Multivector& w);
Multivector hodge_star(const Multivector& w);
Multivector involution(const Multivector& w);

}  // namespace dirac2d

#endif
