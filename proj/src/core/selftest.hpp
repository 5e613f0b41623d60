#ifndef DIRAC2D_SELFTEST_HPP
#define DIRAC2D_SELFTEST_HPP

#include <string>
#include <vector>

namespace dirac2d {

struct CheckResult {
    std::string name;
    double tolerance;
    double measured;
    bool pass;
};

/// The built-in invariant suite: Clifford algebra identities, quadrature
/// Gauss identity, Cauchy projection E_k^2 = I, the diagonal parameter
/// identity (2D and 3D), the WP truth table, the figure-eight values, and an
/// end-to-end disk scattering scene against the analytic oracle.
std::vector<CheckResult> run_selftest();

std::string selftest_report_json(const std::vector<CheckResult>& checks);

}  // namespace dirac2d

#endif
