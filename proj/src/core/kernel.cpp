#include "kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace dirac2d {

namespace {

const double* harmonic40() {
    static double h[42];
    static bool init = [] {
        h[0] = 0.0;
        for (int m = 1; m <= 41; ++m) h[m] = h[m - 1] + 1.0 / m;
        return true;
    }();
    (void)init;
    return h;
}

// T1(z) = sum_{m>=0} (-1)^m (H_m + H_{m+1}) (z^2/4)^m / (m! (m+1)!)
Complex series_T1(Complex z) {
    const double* H = harmonic40();
    const Complex q = 0.25 * z * z;
    Complex sum = H[1], term = 1.0;
    for (int m = 1; m <= 40; ++m) {
        term *= -q / double(m * (m + 1));
        sum += term * (H[m] + H[m + 1]);
        if (std::norm(term) < 1e-36 && m > 4) break;
    }
    return sum;
}

// e1(z) = 2 J1(z)/z = sum (-1)^m (z^2/4)^m / (m!(m+1)!)
Complex series_e1(Complex z) {
    const Complex q = 0.25 * z * z;
    Complex sum = 1.0, term = 1.0;
    for (int m = 1; m <= 40; ++m) {
        term *= -q / double(m * (m + 1));
        sum += term;
        if (std::norm(term) < 1e-36 * std::norm(sum) && m > 4) break;
    }
    return sum;
}

// S0(z) = sum_{m>=1} (-1)^{m+1} H_m (z^2/4)^m / (m!)^2
Complex series_S0(Complex z) {
    const double* H = harmonic40();
    const Complex q = 0.25 * z * z;
    Complex sum = 0.0, term = 1.0;
    for (int m = 1; m <= 40; ++m) {
        term *= -q / double(m * m);
        sum -= term * H[m];
        if (std::norm(term) < 1e-36 && m > 4) break;
    }
    return sum;
}

// J0 series (companion to e1 for the small-|z| split path)
Complex series_J0(Complex z) {
    const Complex q = 0.25 * z * z;
    Complex sum = 1.0, term = 1.0;
    for (int m = 1; m <= 40; ++m) {
        term *= -q / double(m * m);
        sum += term;
        if (std::norm(term) < 1e-36 * std::norm(sum) && m > 4) break;
    }
    return sum;
}

constexpr double kSplitSeriesBound = 8.0;  // |kr| below which series are used

}  // namespace

Kernel::Kernel(Complex k) : k_(k) {
    if (k == Complex(0, 0)) throw std::invalid_argument("Kernel: k must be nonzero");
    L_ = std::log(0.5 * k) + kEulerGamma;
}

Complex Kernel::phi(Vec2 x) const {
    double r = x.norm();
    if (r == 0) throw std::domain_error("phi_k: evaluation at the singularity");
    return Complex(0, 0.5) * hankel1_pair(k_ * r).h0;
}

CVec2 Kernel::grad_phi(Vec2 x) const {
    double r = x.norm();
    if (r == 0) throw std::domain_error("grad_phi_k: evaluation at the singularity");
    Complex c = -Complex(0, 0.5) * k_ * hankel1_pair(k_ * r).h1 / r;
    return x * c;
}

Multivector Kernel::psi(Vec2 x) const {
    Vals v = eval(x);
    Multivector m(2);
    m.at(0b00) = Complex(0, 0.5) * k_ * v.phi;  // (ik/2) Phi
    m.at(0b01) = -0.5 * v.grad.x;
    m.at(0b10) = -0.5 * v.grad.y;
    return m;
}

Kernel::Vals Kernel::eval(Vec2 d) const {
    double r = d.norm();
    if (r == 0) throw std::domain_error("Kernel::eval at the singularity");
    HankelPair h = hankel1_pair(k_ * r);
    Vals v;
    v.phi = Complex(0, 0.5) * h.h0;
    v.grad = d * (-Complex(0, 0.5) * k_ * h.h1 / r);
    return v;
}

Complex Kernel::phi_log_coeff(double r) const { return -besselj01(k_ * r).j0 / kPi; }

Complex Kernel::phi_smooth(double r) const {
    // B = Phi - A log r; the subtraction loses at most a |log r|-sized factor.
    Complex A = phi_log_coeff(r);
    return Complex(0, 0.5) * hankel1_pair(k_ * r).h0 - A * std::log(r);
}

Complex Kernel::grad_log_coeff(double r) const {
    Complex z = k_ * r;
    if (std::abs(z) <= kSplitSeriesBound)
        return k_ * k_ / (2.0 * kPi) * series_e1(z);
    return k_ / kPi * besselj01(z).j1 / r;
}

Complex Kernel::grad_smooth(double r) const {
    Complex z = k_ * r;
    if (std::abs(z) <= kSplitSeriesBound) {
        // w = k^2/2 (L/pi - i/2) e1(kr) - k^2/(4 pi) T1(kr)
        return 0.5 * k_ * k_ * (L_ / kPi - Complex(0, 0.5)) * series_e1(z) -
               k_ * k_ / (4.0 * kPi) * series_T1(z);
    }
    // Away from the singularity the subtraction is benign.
    return grad_radial(r) + 1.0 / (kPi * r * r) - std::log(r) * grad_log_coeff(r);
}

Complex Kernel::grad_radial(double r) const {
    return -Complex(0, 0.5) * k_ * hankel1_pair(k_ * r).h1 / r;
}

Kernel::SplitVals Kernel::split_eval(double r) const {
    SplitVals v;
    const Complex z = k_ * r;
    if (std::abs(z) <= kSplitSeriesBound) {
        Complex j0 = series_J0(z), e1 = series_e1(z);
        v.A = -j0 / kPi;
        v.B = (Complex(0, 0.5) - L_ / kPi) * j0 - series_S0(z) / kPi;
        v.clog = k_ * k_ / (2.0 * kPi) * e1;
        v.w = 0.5 * k_ * k_ * (L_ / kPi - Complex(0, 0.5)) * e1 -
              k_ * k_ / (4.0 * kPi) * series_T1(z);
    } else {
        HankelPair h = hankel1_pair(z);
        BesselJPair j = besselj01(z);
        double lr = std::log(r);
        v.A = -j.j0 / kPi;
        v.B = Complex(0, 0.5) * h.h0 - v.A * lr;
        v.clog = k_ / kPi * j.j1 / r;
        v.w = -Complex(0, 0.5) * k_ * h.h1 / r + 1.0 / (kPi * r * r) - lr * v.clog;
    }
    return v;
}

}  // namespace dirac2d
