#ifndef DIRAC2D_KERNEL_HPP
#define DIRAC2D_KERNEL_HPP

#include "bessel.hpp"
#include "clifford.hpp"
#include "types.hpp"

namespace dirac2d {

/// Fundamental solutions for the 2D Helmholtz operator at complex wavenumber
/// k (Im k >= 0), normalized so that (Delta + k^2) Phi_k = -2 delta:
///
///   Phi_k(x)  = (i/2) H_0^(1)(k|x|)
///   Psi_k(x)  = -1/2 (grad Phi_k(x) - i k Phi_k(x)),
///
/// plus the splits Phi_k = A(r) log r + B(r) and
/// grad Phi_k = [ -1/(pi r^2) + log(r) c_log(r) + w(r) ] (y-x)
/// with A, B, c_log, w analytic in r^2, which the panel quadrature integrates
/// against exact log / Cauchy moments.
class Kernel {
public:
    explicit Kernel(Complex k);

    Complex k() const { return k_; }

    Complex phi(Vec2 x) const;
    CVec2 grad_phi(Vec2 x) const;
    /// Psi_k as a multivector with grades 0 and 1.
    Multivector psi(Vec2 x) const;

    /// Both fundamental-solution values from one Hankel evaluation.
    struct Vals {
        Complex phi;
        CVec2 grad;
    };
    Vals eval(Vec2 d) const;  // d = y - x

    /// Log-split pieces, as functions of r = |y - x| > 0:
    Complex phi_log_coeff(double r) const;     // A(r)  = -J0(kr)/pi
    Complex phi_smooth(double r) const;        // B(r)  = Phi - A log r
    Complex grad_log_coeff(double r) const;    // c_log(r) = (k/pi) J1(kr)/r
    Complex grad_smooth(double r) const;       // w(r)
    /// Radial factor of grad Phi_k: grad = c(r) * (y-x).
    Complex grad_radial(double r) const;

    /// All four split pieces from one set of special-function evaluations.
    struct SplitVals {
        Complex A, B, clog, w;
    };
    SplitVals split_eval(double r) const;
    /// Limits at r = 0: A = -1/pi, B = i/2 - L/pi.
    Complex phi_smooth0() const { return Complex(0, 0.5) - L_ / kPi; }

private:
    Complex k_;
    Complex L_;  // log(k/2) + gamma
};

}  // namespace dirac2d

#endif
