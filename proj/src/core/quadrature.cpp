#include "quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace dirac2d {

namespace {

struct GL16Data {
    Row x{}, w{};
    GL16Data() {
        const int n = kPanelOrder;
        for (int i = 0; i < n / 2; ++i) {
            // Chebyshev initial guess, Newton on P_16.
            double xi = std::cos(kPi * (i + 0.75) / (n + 0.5));
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = xi;
                for (int m = 2; m <= n; ++m) {
                    double p2 = ((2 * m - 1) * xi * p1 - (m - 1) * p0) / m;
                    p0 = p1;
                    p1 = p2;
                }
                double dp = n * (xi * p1 - p0) / (xi * xi - 1.0);
                double dx = p1 / dp;
                xi -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            double p0 = 1.0, p1 = xi;
            for (int m = 2; m <= n; ++m) {
                double p2 = ((2 * m - 1) * xi * p1 - (m - 1) * p0) / m;
                p0 = p1;
                p1 = p2;
            }
            double dp = n * (xi * p1 - p0) / (xi * xi - 1.0);
            double wi = 2.0 / ((1.0 - xi * xi) * dp * dp);
            x[i] = -xi;  // cos starts near +1; store ascending
            x[n - 1 - i] = xi;
            w[i] = w[n - 1 - i] = wi;
        }
        // enforce exact antisymmetry
        for (int i = 0; i < n / 2; ++i) x[i] = -x[n - 1 - i];
    }
};

const GL16Data& gl16() {
    static GL16Data d;
    return d;
}

// Transform matrix T[m][j] = (2m+1)/2 * w_j * P_m(x_j): maps node values to
// Legendre coefficients, exact for degree <= 15 (GL16 integrates deg 31).
const std::array<Row, kPanelOrder>& node_to_legendre() {
    static std::array<Row, kPanelOrder> T;
    static bool init = [] {
        for (int j = 0; j < kPanelOrder; ++j) {
            auto P = legendre_values(gl16().x[j]);
            for (int m = 0; m < kPanelOrder; ++m)
                T[m][j] = 0.5 * (2 * m + 1) * gl16().w[j] * P[m];
        }
        return true;
    }();
    (void)init;
    return T;
}

// Bernstein-ellipse radius of t0 relative to [-1,1] (=1 on the segment).
double ellipse_radius(Complex t0) {
    Complex s = std::sqrt(t0 * t0 - 1.0);
    double r1 = std::abs(t0 + s), r2 = std::abs(t0 - s);
    return std::max(r1, r2);
}

// Legendre-Q values Q_0..Q_{nmax} at complex t0 off [-1,1], or on the cut
// (real |t0|<1, principal value sense). Upward recurrence where it is
// stable (on/near the cut), Miller's downward recurrence outside.
std::vector<Complex> legendre_q(Complex t0, int nmax) {
    std::vector<Complex> Q(nmax + 1);
    const bool on_cut = (t0.imag() == 0.0) && std::abs(t0.real()) <= 1.0;
    Complex q0;
    if (on_cut) {
        double x = t0.real();
        q0 = 0.5 * std::log((1.0 + x) / (1.0 - x));
    } else {
        q0 = 0.5 * (std::log(t0 + 1.0) - std::log(t0 - 1.0));
    }
    double rho = on_cut ? 1.0 : ellipse_radius(t0);
    if (rho <= 1.25) {
        Q[0] = q0;
        if (nmax >= 1) Q[1] = t0 * q0 - 1.0;
        for (int m = 1; m < nmax; ++m)
            Q[m + 1] = (double(2 * m + 1) * t0 * Q[m] - double(m) * Q[m - 1]) / double(m + 1);
    } else {
        int guard = std::min(400, int(std::ceil(22.0 / std::log(rho))) + 8);
        int M = nmax + guard;
        Complex qup = 0.0, qcur = 1.0;  // unnormalized minimal solution
        std::vector<Complex> tmp(nmax + 1);
        for (int m = M; m >= 1; --m) {
            Complex qdown = (double(2 * m + 1) * t0 * qcur - double(m + 1) * qup) / double(m);
            qup = qcur;
            qcur = qdown;
            if (m - 1 <= nmax) tmp[m - 1] = qcur;
            if (std::norm(qcur) > 1e280) {  // rescale
                double s = 1e-280;
                qup *= s;
                qcur *= s;
                for (int i = m - 1; i <= nmax; ++i)
                    if (i >= 0) tmp[i] *= s;
            }
        }
        Complex scale = q0 / tmp[0];
        for (int m = 0; m <= nmax; ++m) Q[m] = tmp[m] * scale;
    }
    return Q;
}

// Moments of log against Legendre polynomials:
//   R_m = int P_m(t) log(t-t0) dt  (complex t0; Re gives log|t-t0|)
// via R_m = 2/(2m+1) (Q_{m+1} - Q_{m-1}) for m >= 1 (boundary terms vanish),
// and the closed form for R_0.
std::vector<Complex> log_moments_c(Complex t0) {
    auto Q = legendre_q(t0, kPanelOrder);
    std::vector<Complex> R(kPanelOrder);
    const bool on_cut = (t0.imag() == 0.0) && std::abs(t0.real()) <= 1.0;
    if (on_cut) {
        double x = t0.real();
        double a = (1.0 - x) * std::log1p(-x) + (1.0 + x) * std::log1p(x) - 2.0;
        R[0] = a;
    } else {
        auto F = [&](double t) { return (t - t0) * (std::log(t - t0) - 1.0); };
        R[0] = F(1.0) - F(-1.0);
    }
    for (int m = 1; m < kPanelOrder; ++m)
        R[m] = 2.0 / double(2 * m + 1) * (Q[m + 1] - Q[m - 1]);
    return R;
}

template <class MomT, class RowT>
RowT weights_from_moments(const std::vector<MomT>& M) {
    const auto& T = node_to_legendre();
    RowT W{};
    for (int j = 0; j < kPanelOrder; ++j) {
        MomT acc{};
        for (int m = 0; m < kPanelOrder; ++m) acc += T[m][j] * M[m];
        W[j] = acc;
    }
    return W;
}

}  // namespace

const Row& gl16_nodes() { return gl16().x; }
const Row& gl16_weights() { return gl16().w; }

std::array<double, kPanelOrder + 1> legendre_values(double x) {
    std::array<double, kPanelOrder + 1> P;
    P[0] = 1.0;
    P[1] = x;
    for (int m = 1; m < kPanelOrder; ++m)
        P[m + 1] = ((2 * m + 1) * x * P[m] - m * P[m - 1]) / (m + 1);
    return P;
}

Row log_weights(double t0) {
    if (std::abs(t0) > 1.0) return log_weights_near(Complex(t0, 0));
    auto Rc = log_moments_c(Complex(t0, 0));
    std::vector<double> R(kPanelOrder);
    for (int m = 0; m < kPanelOrder; ++m) R[m] = Rc[m].real();
    return weights_from_moments<double, Row>(R);
}

Row cauchy_weights(double t0) {
    // p.v. int P_m/(t-t0) dt = -2 Q_m(t0) (on-cut Q for |t0|<1)
    auto Q = legendre_q(Complex(t0, 0), kPanelOrder - 1);
    std::vector<double> M(kPanelOrder);
    for (int m = 0; m < kPanelOrder; ++m) M[m] = -2.0 * Q[m].real();
    return weights_from_moments<double, Row>(M);
}

Row log_weights_near(Complex t0) {
    auto Rc = log_moments_c(t0);
    std::vector<double> R(kPanelOrder);
    for (int m = 0; m < kPanelOrder; ++m) R[m] = Rc[m].real();  // log|t-t0|
    return weights_from_moments<double, Row>(R);
}

CRow cauchy_weights_near(Complex t0) {
    auto Q = legendre_q(t0, kPanelOrder - 1);
    std::vector<Complex> M(kPanelOrder);
    for (int m = 0; m < kPanelOrder; ++m) M[m] = -2.0 * Q[m];
    return weights_from_moments<Complex, CRow>(M);
}

PanelChart::PanelChart(const CRow& values) {
    const auto& T = node_to_legendre();
    for (int m = 0; m < kPanelOrder; ++m) {
        Complex acc = 0;
        for (int j = 0; j < kPanelOrder; ++j) acc += T[m][j] * values[j];
        coeff_[m] = acc;
    }
}

Complex PanelChart::eval(Complex t) const {
    // Clenshaw for Legendre series.
    Complex b1 = 0, b2 = 0;
    for (int m = kPanelOrder - 1; m >= 1; --m) {
        Complex b0 = coeff_[m] + double(2 * m + 1) / (m + 1) * t * b1 -
                     double(m + 1) / (m + 2) * b2;
        b2 = b1;
        b1 = b0;
    }
    return coeff_[0] + t * b1 - 0.5 * b2;
}

Complex PanelChart::deriv(Complex t) const {
    // derivative via finite Legendre series: P'_m relation; use simple
    // complex-step-free centered difference with small real step is not
    // robust off-axis, so differentiate the Clenshaw recurrence directly.
    // d/dt of the series: sum c_m P'_m(t). Use P'_m recurrence:
    // P'_{m+1} = (2m+1) P_m + P'_{m-1}.
    std::array<Complex, kPanelOrder> P, dP;
    P[0] = 1.0;
    dP[0] = 0.0;
    if (kPanelOrder > 1) {
        P[1] = t;
        dP[1] = 1.0;
    }
    for (int m = 1; m + 1 < kPanelOrder; ++m) {
        P[m + 1] = (double(2 * m + 1) * t * P[m] - double(m) * P[m - 1]) / double(m + 1);
        dP[m + 1] = double(2 * m + 1) * P[m] + dP[m - 1];
    }
    Complex acc = 0;
    for (int m = 0; m < kPanelOrder; ++m) acc += coeff_[m] * dP[m];
    return acc;
}

bool PanelChart::solve(Complex w, Complex t_init, Complex& t_out) const {
    Complex t = t_init;
    for (int it = 0; it < 60; ++it) {
        Complex f = eval(t) - w;
        Complex d = deriv(t);
        if (d == Complex(0, 0)) return false;
        Complex step = f / d;
        t -= step;
        if (std::abs(step) < 1e-14) {
            t_out = t;
            return std::abs(t) < 3.0;  // reject wild roots
        }
    }
    return false;
}

}  // namespace dirac2d
