#ifndef DIRAC2D_OPERATORS_HPP
#define DIRAC2D_OPERATORS_HPP

#include <array>
#include <memory>

#include "geometry.hpp"
#include "kernel.hpp"
#include "linalg.hpp"
#include "types.hpp"

namespace dirac2d {

/// Constant diagonal matrices of the 2D transmission system, in the frame
/// {1, nu tau, nu, tau}. They satisfy P (khat M' + M) P' = I entry-wise with
/// M = diag[khat, |khat|, ehat, 1], khat M' = diag[|khat|, khat, 1, khat/|khat|].
struct DiracParams2D {
    Complex k_hat, eps_hat;
    std::array<Complex, 4> P, Pp, N, Np;
};

/// Requires khat off (-inf, 0] and ehat != -1.
DiracParams2D dirac_params_2d(Complex k_hat, Complex eps_hat);

/// The eight-entry diagonals of the 3D system (parameter functions only; no
/// 3D assembly here). Requires khat off (-inf,0], ehat != -1, khat^2/ehat != -1.
struct DiracParams3D {
    Complex k_hat, eps_hat, mu_hat;
    std::array<Complex, 8> P, Pp, N, Np;
};
DiracParams3D dirac_params_3d(Complex k_hat, Complex eps_hat);

/// Nystrom matrix of the Cauchy singular operator E_k (4N x 4N,
/// component-major: rows/cols grouped as [h1-block | h2 | h3 | h4]).
Matrix assemble_Ek(Complex k, const Mesh& mesh);

/// One scaled Cauchy-operator contribution: prefactor * diag(row_scale)
/// E_k[targets, sources] diag(col_scale).
struct EkContribution {
    Complex k;
    std::array<Complex, 4> row_scale, col_scale;
    Complex prefactor;
};

/// Accumulates several contributions in one pass over the node pairs (the
/// classification, product-integration weight rows, and frame dot products
/// are wavenumber-independent, so the transmission system assembles both
/// E_{k+} and E_{k-} for the price of little more than one).
/// Targets: node indices [tbegin, tend); sources: panels [pbegin, pend);
/// `into` is component-major on the local target/source index sets.
void assemble_ek_multi(const std::vector<EkContribution>& contribs, const Mesh& mesh,
                       int tbegin, int tend, int pbegin, int pend, Matrix& into);

void assemble_ek_scaled(Complex k, const Mesh& mesh, int tbegin, int tend, int pbegin,
                        int pend, const std::array<Complex, 4>& row_scale,
                        const std::array<Complex, 4>& col_scale, Complex prefactor,
                        Matrix& into);

struct DiracSystem {
    std::shared_ptr<const Mesh> mesh;
    Complex k_minus, k_plus, k_hat, eps_hat;
    DiracParams2D params;
    Matrix A;  // I + P E_{k+} N' - N E_{k-} P'
};

/// Full Dirac transmission system. Requires Im k_minus >= 0 and Im k_plus >= 0.
DiracSystem assemble_dirac_system(Complex k_minus, Complex k_hat, Complex eps_hat,
                                  std::shared_ptr<const Mesh> mesh);

/// One block-row of the sector decomposition: the (4K x 4K) interaction of
/// target sector 0 with source sector g, for a mesh with S symmetry sectors
/// (K = nodes per sector). Includes the identity term when g == 0.
Matrix assemble_dirac_sector(Complex k_minus, Complex k_hat, Complex eps_hat,
                             const Mesh& mesh, int sector);

/// Right-hand side 2 N f0 for an incident plane wave of unit direction d:
/// f0 = [i k_- u0, 0, d_nu u0, d_tau u0] with u0 = exp(i k_- d.x).
Vector rhs_plane_wave(Complex k_minus, Vec2 direction, const Mesh& mesh,
                      const DiracParams2D& params);

/// Trace of the Dirac field F = grad U + i k U for U = exp(i k d.x)
/// (plane wave, entire solution) in the frame {1, nu tau, nu, tau}.
Vector plane_wave_trace(Complex k, Vec2 direction, const Mesh& mesh);

/// Trace of F = grad U + i k U for U = Phi_k(. - x0) (radiating point source).
Vector point_source_trace(Complex k, Vec2 source, const Mesh& mesh);

/// Residual of the Cauchy projection identity E_k^2 = I, measured as the
/// worst relative l2 defect ||E(E f) - f|| / ||f|| over a deterministic
/// family of resolved probe densities (Fourier modes up to max_mode in all
/// four components). This is the quantity that converges under refinement:
/// the raw matrix norm ||E^2 - I||_2 is O(1) for any composite-panel Nystrom
/// scheme because rough grid modes put log spikes at panel junctions.
double cauchy_projection_residual(const Matrix& Ek, const Mesh& mesh, int max_mode = 8);

/// Membership test for the well-posedness cone WP(k-, k+), evaluated with
/// phi_pm = |arg(k_pm / i)| by the four-case rule.
bool wp_region_contains(Complex z, Complex k_minus, Complex k_plus);

/// The two branches of the corner double-layer essential spectrum curve
/// +- sin(delta pi (1+i xi)/2) / sin(pi (1+i xi)/2), |delta| < 1.
std::pair<Complex, Complex> figure_eight(double xi, double delta);

/// Test hook: flips the sign of the (2,1) block of E_k so that the E_k^2 = I
/// self-check must fail. Never set outside fault-injection tests.
void set_ek_row2_sign_injection(bool enabled);
bool ek_row2_sign_injection();

}  // namespace dirac2d

#endif
