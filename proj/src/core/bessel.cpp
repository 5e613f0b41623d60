#include "bessel.hpp"

#include <cmath>
#include <stdexcept>

namespace dirac2d {

namespace {

constexpr double kSeriesRadius = 7.0;
constexpr double kAsymRadius = 16.5;
constexpr double kAnchorRadius = 17.0;

// Harmonic numbers H_0..H_40.
const double* harmonic() {
    static double h[41];
    static bool init = [] {
        h[0] = 0.0;
        for (int m = 1; m <= 40; ++m) h[m] = h[m - 1] + 1.0 / m;
        return true;
    }();
    (void)init;
    return h;
}

// Power series for J0, J1, Y0, Y1; |z| <= ~8.
HankelPair hankel_series(Complex z) {
    const double* H = harmonic();
    const Complex q = 0.25 * z * z;  // (z/2)^2
    Complex j0 = 1.0, j1 = 1.0, s0 = 0.0, t1 = H[1];
    Complex term0 = 1.0, term1 = 1.0;
    for (int m = 1; m <= 40; ++m) {
        term0 *= -q / double(m * m);           // (-1)^m q^m / (m!)^2
        term1 *= -q / double(m * (m + 1));     // (-1)^m q^m / (m!(m+1)!)
        j0 += term0;
        j1 += term1;
        s0 -= term0 * H[m];                    // sum (-1)^{m+1} H_m q^m/(m!)^2
        t1 += term1 * (H[m] + H[m + 1]);
        if (std::norm(term0) < 1e-36 * std::norm(j0) && m > 4) break;
    }
    j1 *= 0.5 * z;
    const Complex lg = std::log(0.5 * z) + kEulerGamma;
    const Complex y0 = (2.0 / kPi) * (lg * j0 + s0);
    const Complex y1 = (2.0 / kPi) * (lg * j1 - 1.0 / z - 0.25 * z * t1);
    return {j0 + Complex(0, 1) * y0, j1 + Complex(0, 1) * y1};
}

// Large-argument expansion, |z| >= ~16. Truncated at the smallest term.
Complex hankel_asym(int nu, Complex z) {
    const Complex iz = Complex(0, 1) / z;
    const double mu = 4.0 * nu * nu;
    Complex sum = 1.0, term = 1.0;
    double last = 1.0;
    for (int k = 0; k < 50; ++k) {
        term *= (mu - double((2 * k + 1) * (2 * k + 1))) / (8.0 * (k + 1)) * iz;
        double mag = std::abs(term);
        if (mag >= last) break;  // past the smallest term
        sum += term;
        last = mag;
        if (mag < 1e-17 * std::abs(sum)) break;
    }
    const Complex phase = z - (0.5 * nu + 0.25) * kPi;
    const Complex expph = std::exp(Complex(0, 1) * phase);
    if (expph == Complex(0, 0) || !std::isfinite(std::abs(expph)))
        throw std::range_error("hankel1: exp(iz) over/underflow");
    return std::sqrt(2.0 / (kPi * z)) * expph * sum;
}

HankelPair hankel_asym_pair(Complex z) { return {hankel_asym(0, z), hankel_asym(1, z)}; }

// Taylor continuation of z w'' + w' + z w = 0 from (w, w') at zc to zc + h.
// Matching powers of h in (zc+h) w'' + w' + (zc+h) w = 0 gives, for n >= 0,
//   zc (n+2)(n+1) c_{n+2} + (n+1)^2 c_{n+1} + zc c_n + c_{n-1} = 0.
void taylor_step(Complex zc, Complex& w, Complex& wp, Complex h) {
    constexpr int kMax = 70;
    Complex c[kMax + 3];
    c[0] = w;
    c[1] = wp;
    int ntop = kMax;
    for (int n = 0; n <= kMax; ++n) {
        Complex cm1 = (n == 0) ? Complex(0) : c[n - 1];
        c[n + 2] = -(double((n + 1) * (n + 1)) * c[n + 1] + zc * c[n] + cm1) /
                   (zc * double((n + 2) * (n + 1)));
    }
    Complex sum = 0, dsum = 0;  // Horner from the top
    for (int n = ntop + 2; n >= 1; --n) {
        sum = sum * h + c[n];
        dsum = dsum * h + double(n) * c[n];
    }
    sum = sum * h + c[0];
    w = sum;
    wp = dsum;
}

HankelPair hankel_march(Complex z) {
    const double r = std::abs(z);
    const Complex dir = z / r;
    const Complex anchor = dir * kAnchorRadius;
    HankelPair a = hankel_asym_pair(anchor);
    Complex w = a.h0, wp = -a.h1;
    const double ratio = r / kAnchorRadius;
    const int nsteps = std::max(1, (int)std::ceil(std::log(ratio) / std::log(0.6)));
    const double f = std::pow(ratio, 1.0 / nsteps);
    double rc = kAnchorRadius;
    for (int s = 0; s < nsteps; ++s) {
        double rn = (s == nsteps - 1) ? r : rc * f;
        taylor_step(dir * rc, w, wp, dir * (rn - rc));
        rc = rn;
    }
    return {w, -wp};
}

}  // namespace

HankelPair hankel1_pair(Complex z) {
    if (z == Complex(0, 0)) throw std::domain_error("hankel1: z = 0");
    const double r = std::abs(z);
    HankelPair h;
    // The J + iY series assembly cancels like exp(2 Im z); keep it close to
    // the real axis and let the ODE march (stable inward for H^(1)) cover the
    // rest of the disk below the asymptotic radius.
    if (r <= kSeriesRadius && z.imag() <= 0.5)
        h = hankel_series(z);
    else if (r < kAsymRadius)
        h = hankel_march(z);
    else
        h = hankel_asym_pair(z);
    if (!std::isfinite(h.h0.real()) || !std::isfinite(h.h1.real()) ||
        !std::isfinite(h.h0.imag()) || !std::isfinite(h.h1.imag()))
        throw std::range_error("hankel1: result not finite");
    return h;
}

Complex hankel1(int order, Complex z) {
    HankelPair p = hankel1_pair(z);
    if (order == 0) return p.h0;
    if (order == 1) return p.h1;
    throw std::invalid_argument("hankel1: order must be 0 or 1");
}

BesselJPair besselj01(Complex z) {
    const double r = std::abs(z);
    const double aim = std::abs(z.imag());
    if (r <= 7.5 || aim > 4.0) {
        // Series: the alternating-sum cancellation is ~exp(|z| - |Im z|),
        // harmless whenever the reflection path below would be worse.
        const Complex q = 0.25 * z * z;
        Complex j0 = 1.0, j1 = 1.0, term0 = 1.0, term1 = 1.0;
        for (int m = 1; m <= 60; ++m) {
            term0 *= -q / double(m * m);
            term1 *= -q / double(m * (m + 1));
            j0 += term0;
            j1 += term1;
            if (std::norm(term0) < 1e-36 * std::norm(j0) && m > 4) break;
        }
        return {j0, j1 * 0.5 * z};
    }
    // Near-real z: J_n = (H^(1)_n(z) + conj(H^(1)_n(conj z)))/2.
    HankelPair hp = hankel1_pair(z);
    HankelPair hm = hankel1_pair(std::conj(z));
    return {0.5 * (hp.h0 + std::conj(hm.h0)), 0.5 * (hp.h1 + std::conj(hm.h1))};
}

std::vector<Complex> besselj_seq(Complex z, int nmax) {
    if (z == Complex(0, 0)) {
        std::vector<Complex> j(nmax + 1, Complex(0));
        j[0] = 1.0;
        return j;
    }
    const int M = nmax + 16 + (int)std::ceil(1.3 * std::abs(z));
    std::vector<Complex> f(M + 2, Complex(0));
    f[M + 1] = 0.0;
    f[M] = 1e-280;
    for (int m = M; m >= 1; --m) {
        f[m - 1] = (2.0 * m / z) * f[m] - f[m + 1];
        if (std::norm(f[m - 1]) > 1e260) {  // rescale to avoid overflow
            for (int i = m - 1; i <= M + 1; ++i) f[i] *= 1e-260;
        }
    }
    Complex norm = f[0];
    for (int m = 2; m <= M; m += 2) norm += 2.0 * f[m];
    std::vector<Complex> j(nmax + 1);
    for (int n = 0; n <= nmax; ++n) j[n] = f[n] / norm;
    return j;
}

std::vector<Complex> hankel1_seq(Complex z, int nmax) {
    HankelPair p = hankel1_pair(z);
    std::vector<Complex> h(std::max(nmax + 1, 2));
    h[0] = p.h0;
    h[1] = p.h1;
    for (int n = 1; n < nmax; ++n) h[n + 1] = (2.0 * n / z) * h[n] - h[n - 1];
    h.resize(nmax + 1);
    return h;
}

}  // namespace dirac2d
