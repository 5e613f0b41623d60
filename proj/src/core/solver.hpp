#ifndef DIRAC2D_SOLVER_HPP
#define DIRAC2D_SOLVER_HPP

#include <string>
#include <vector>

#include "operators.hpp"

namespace dirac2d {

/// Direct dense solve; throws RankDeficiencyError (with a sigma_min
/// estimate) on numerically singular systems.
Vector solve_direct(const Matrix& a, const Vector& b);

struct CondResult {
    double cond2;
    double sigma_max, sigma_min;
    std::string method;  // "svd" or "power+lu-inverse-iteration"
};

/// 2-norm condition number: full SVD up to dim 1024, power iteration for
/// sigma_max + LU inverse iteration for sigma_min above (deterministic,
/// rtol ~1e-8; cross-validated against the SVD in tests).
CondResult condition_number(const Matrix& a);

enum class MaterialCase { positive_dielectric, plasmonic, reverse_plasmonic, custom };

/// The section-9.1 parameter triples: (khat, ehat) per case.
std::pair<Complex, Complex> material_params(MaterialCase c);

struct SweepRecord {
    Complex k_minus;
    double cond2;
    double sigma_min;
    int gmres_iters = -1;  // absent unless a solve was requested
    bool flag = false;     // resonance suspect: cond > 10 x rolling median
    std::string method;
};

struct SweepOptions {
    double k_max = 20.0;
    int n_samples = 400;
    int n_panels = 60;
    Complex k_hat{1.5, 0}, eps_hat{2.25, 0};  // used by MaterialCase::custom
    int median_window = 25;                   // half width of the flag window
    double flag_factor = 10.0;
};

/// Condition-number sweep over the positive sweep parameter s in (0, k_max]:
/// k_- = s for the positive/plasmonic cases, k_+ = s (k_- = s/khat) for the
/// reverse plasmonic case. Uses the exact block-circulant reduction when the
/// mesh has cyclic symmetry, dense LU otherwise.
std::vector<SweepRecord> sweep(MaterialCase mcase, std::shared_ptr<Curve> curve,
                               const SweepOptions& opt);

struct HomotopyResult {
    Vector h;                          // Richardson-extrapolated density
    Vector h_first;                    // solution at the first (most absorbing) step
    std::vector<double> deltas;        // the Im eps_hat path
    std::vector<double> probe_diffs;   // max-norm probe increments
    std::vector<int> gmres_iters;
    bool converged;
};

struct HomotopyOptions {
    double delta0 = 0.1;
    double ratio = 0.1;
    int steps = 6;
    double gmres_tol = 1e-12;
    bool use_direct = false;  // dense LU per step instead of warm-started GMRES
    /// Reverse-plasmonic branch: hold k_plus = k_minus_arg fixed (real),
    /// khat = -sqrt(eps_hat) (lower half plane), k_minus = k_plus/khat.
    bool reverse_branch = false;
};

/// Plasmonic limit solve: eps_hat = target + i delta_j with delta_j shrinking
/// geometrically, khat = sqrt(eps_hat) (non-magnetic), GMRES warm starts along
/// the path, Richardson limit from the last two solutions. Probes are fixed
/// field sample points used for the Cauchy-sequence diagnostic.
HomotopyResult homotopy_solve(std::shared_ptr<const Mesh> mesh, Complex k_minus,
                              double eps_hat_target, Vec2 direction,
                              const std::vector<Vec2>& probes, HomotopyOptions opt = {});

}  // namespace dirac2d

#endif
