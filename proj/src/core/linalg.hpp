#ifndef DIRAC2D_LINALG_HPP
#define DIRAC2D_LINALG_HPP

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "types.hpp"

namespace dirac2d {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Run fn(i) for i in [0, n) on a couple of worker threads; deterministic
/// partition, blocks until done.
void parallel_for(int n, const std::function<void(int)>& fn);

struct RankDeficiencyError : std::runtime_error {
    double sigma_min_estimate;
    explicit RankDeficiencyError(double s)
        : std::runtime_error("solve_direct: matrix is numerically singular"),
          sigma_min_estimate(s) {}
};

/// LU factorization (LAPACK zgetrf) with solve support; keeps the factors.
class LuFactor {
public:
    explicit LuFactor(Matrix a);  // takes ownership (factorizes in place)
    Vector solve(const Vector& b) const;
    Vector solve_adjoint(const Vector& b) const;  // A^H x = b
    int n() const { return int(lu_.rows()); }
    /// Smallest |U_ii| / largest |U_ii|: cheap singularity indicator.
    double pivot_ratio() const;

private:
    Matrix lu_;
    std::vector<int> ipiv_;
};

/// ||A||_2 by power iteration on A^H A (deterministic start, rtol 1e-8).
double norm2(const Matrix& a, double rtol = 1e-8, int max_iter = 300);

/// Same for an operator given by matvec callbacks (apply and adjoint-apply).
double norm2_implicit(int n, const std::function<Vector(const Vector&)>& apply,
                      const std::function<Vector(const Vector&)>& apply_adjoint);

/// Smallest singular value via inverse iteration on the LU factors.
double sigma_min(const LuFactor& lu, double rtol = 1e-8, int max_iter = 200);

/// Single-precision variant for sweep-grade estimates (relative accuracy
/// ~cond * 1e-7; plenty for resonance flagging, at half the LU cost).
double sigma_min_single(const Matrix& a, double rtol = 1e-5, int max_iter = 80);

/// Full singular values, descending (LAPACK zgesdd).
std::vector<double> singular_values(const Matrix& a);

/// One-sided Jacobi SVD (slow, independent of LAPACK): test oracle.
std::vector<double> singular_values_jacobi(Matrix a);

struct GmresResult {
    Vector x;
    int iterations = 0;
    bool converged = false;
    std::vector<double> residual_history;  // relative residuals per iteration
};

struct GmresNonConvergence : std::runtime_error {
    Vector best_iterate;
    double relative_residual;
    GmresNonConvergence(Vector x, double r)
        : std::runtime_error("gmres: no convergence within max_iter (best residual " +
                             std::to_string(r) + ")"),
          best_iterate(std::move(x)),
          relative_residual(r) {}
};

struct GmresOptions {
    double tol = 2.220446049250313e-16;  // relative residual target
    int max_iter = 0;                    // 0: dimension of the system
    const Vector* x0 = nullptr;          // warm start
};

/// Unrestarted GMRES with modified Gram-Schmidt (one reorthogonalization
/// pass). Throws on max_iter without convergence unless the residual has
/// stagnated at the roundoff floor.
GmresResult gmres(const Matrix& a, const Vector& b, GmresOptions opt = {});

}  // namespace dirac2d

#endif
