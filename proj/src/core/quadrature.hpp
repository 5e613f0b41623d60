#ifndef DIRAC2D_QUADRATURE_HPP
#define DIRAC2D_QUADRATURE_HPP

#include <array>
#include <complex>

#include "types.hpp"

namespace dirac2d {

inline constexpr int kPanelOrder = 16;

using Row = std::array<double, kPanelOrder>;
using CRow = std::array<Complex, kPanelOrder>;

/// Canonical 16-point Gauss-Legendre rule on [-1,1] (Newton on P_16,
/// accurate to machine precision; weights sum to 2, nodes antisymmetric).
const Row& gl16_nodes();
const Row& gl16_weights();

/// P_m(x) for m = 0..kPanelOrder (note: one extra order for the moment
/// integration by parts).
std::array<double, kPanelOrder + 1> legendre_values(double x);

/// Weights W_j such that sum_j W_j f(t_j) = int_{-1}^{1} f(t) K(t) dt exactly
/// for polynomials f of degree <= 15, where K is log|t-t0| or 1/(t-t0)
/// (principal value when t0 is inside [-1,1]). Built from analytic Legendre
/// moments; stable for t0 on the interval, near it, and well outside.
Row log_weights(double t0);
Row cauchy_weights(double t0);

/// Same for complex t0 (near-field targets displaced off the panel):
/// log weights use Re log(t - t0) = log|t - t0|, so they are real.
Row log_weights_near(Complex t0);
CRow cauchy_weights_near(Complex t0);

/// Legendre-coefficient interpolation of panel data (e.g. the complex chart
/// z(t) of a panel from its 16 node positions). Evaluates anywhere on/near
/// [-1,1] and Newton-solves z(t) = w for complex t.
class PanelChart {
public:
    PanelChart() = default;
    explicit PanelChart(const CRow& values_at_nodes);
    Complex eval(Complex t) const;
    Complex deriv(Complex t) const;
    /// Solve eval(t) = w by Newton from t_init; returns success.
    bool solve(Complex w, Complex t_init, Complex& t_out) const;

private:
    std::array<Complex, kPanelOrder> coeff_{};
};

}  // namespace dirac2d

#endif
