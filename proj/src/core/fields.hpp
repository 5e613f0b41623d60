#ifndef DIRAC2D_FIELDS_HPP
#define DIRAC2D_FIELDS_HPP

#include <optional>
#include <string>
#include <vector>

#include "operators.hpp"

namespace dirac2d {

struct Traces {
    Vector h_plus;   // N' h
    Vector h_minus;  // P' h
};
Traces traces_from_density(const Vector& h, const DiracParams2D& params);

enum class Region { interior, exterior };

/// Scalar and vector layer potentials of the field representation, applied
/// to the four component densities at an off-boundary target; panels closer
/// than their own arclength are handled by product integration against the
/// complex-displaced singularity.
struct LayerVals {
    Complex Knu{}, Ktau{}, S1{};   // scalar potentials against h1, h2, h3
    CVec2 Snu{}, Stau{}, KI{}, KJ{};  // vector potentials for the gradient
};
LayerVals eval_layers(Complex k, const Mesh& mesh, Vec2 x, const Complex* h1,
                      const Complex* h2, const Complex* h3, const Complex* h4,
                      bool need_gradient);

/// U at points from a trace-side density (h_plus with k_plus inside, or
/// h_minus with k_minus outside):
///   U = 1/(2ik) (-Knu h1 - Ktau h2 + S1 h3).
/// Throws if a point is not in the expected region.
std::vector<Complex> eval_U(const Vector& h_pm, Complex k_pm, const Mesh& mesh,
                            const std::vector<Vec2>& points, Region region,
                            bool check_region = true);

/// grad U = 1/2 (Snu h1 + Stau h2 - KI h3 - KJ h4).
std::vector<CVec2> eval_gradU(const Vector& h_pm, Complex k_pm, const Mesh& mesh,
                              const std::vector<Vec2>& points, Region region,
                              bool check_region = true);

/// Separation-of-variables solution of the disk transmission problem
/// (incident plane wave): the independent verification oracle.
class DiskOracle {
public:
    DiskOracle(double radius, Complex k_minus, Complex k_hat, Complex eps_hat,
               Vec2 direction, int truncation_order);

    Complex incident(Vec2 x) const;
    Complex u_plus(Vec2 x) const;        // total interior field
    Complex u_minus(Vec2 x) const;       // scattered exterior field
    CVec2 grad_incident(Vec2 x) const;
    CVec2 grad_u_plus(Vec2 x) const;
    CVec2 grad_u_minus(Vec2 x) const;

    /// Worst boundary mismatch of (u+, du+/dnu) vs (u- + u0, ehat d(u-+u0))
    /// over n equispaced boundary samples; construction self-check.
    double boundary_residual(int n_samples) const;

    int order() const { return order_; }
    const std::vector<Complex>& interior_coeffs() const { return a_; }
    const std::vector<Complex>& scattered_coeffs() const { return b_; }
    /// Modes whose 2x2 solve was ill-conditioned (near modal resonance).
    const std::vector<int>& flagged_modes() const { return flagged_; }

private:
    double R_;
    Complex km_, kp_, ehat_;
    double phid_;  // incidence angle
    int order_;
    std::vector<Complex> a_, b_;
    std::vector<int> flagged_;
};

struct FieldGrid {
    double xmin, xmax, ymin, ymax;
    int nx, ny;
    Complex k_minus, k_plus, eps_hat;
    // tags: 0 exterior, 1 interior, 2 excluded (on/too close to boundary)
    std::vector<int> tag;        // row-major, j*nx + i
    std::vector<int> collar;     // 1 when within the near-boundary collar
    std::vector<Complex> U;
    std::vector<CVec2> gradU;    // empty unless requested
};

struct GridSpec {
    double xmin, xmax, ymin, ymax;
    int nx, ny;
    bool gradient = false;
};

FieldGrid grid_eval(const DiracSystem& sys, const Vector& h, const GridSpec& spec);

/// Worst nodal violation of the transmission jump conditions
///   u+ = u- + u0,   dnu u+ = ehat dnu (u- + u0),
/// with the one-sided boundary traces taken through the Hardy projections
/// f+ = (h+ + E_{k+} h+)/2 and f- = (E_{k-} h- - h-)/2 (Plemelj limits of
/// the field representation).
struct JumpResidual {
    double value_jump;
    double deriv_jump;
};
JumpResidual transmission_residual(const DiracSystem& sys, const Vector& h,
                                   Vec2 direction);

struct CornerFitSide {
    Complex eta;          // fitted exponent
    double residual;      // rms relative misfit
    int n_points;
    bool ok;              // power law plausible (residual below threshold)
    bool oscillatory;     // standing-wave pair model was needed
    double mode_ratio;    // |A|/|B| of the t^{+i xi} vs t^{-i xi} amplitudes
};

struct CornerFit {
    CornerFitSide side_a;  // approaching the corner with t -> 0+
    CornerFitSide side_b;  // t -> 1-
};

/// Least-squares fit of log h3 against log(arclength distance to the corner)
/// over panels first_panel..last_panel counted from the corner (default 3..12).
CornerFit corner_exponent_fit(const Vector& h, const Mesh& mesh, int first_panel = 3,
                              int last_panel = 12);

}  // namespace dirac2d

#endif
