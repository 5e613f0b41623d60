// Acceptance suite: every criterion at its stated tolerance, one line each.
// Usage: acceptance [criterion numbers...]; no arguments runs all twelve.

#include <chrono>
#include <cstdio>
#include <random>
#include <set>
#include <string>

#include "core/fields.hpp"
#include "core/quadrature.hpp"
#include "core/solver.hpp"

using namespace dirac2d;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

struct Criterion {
    int id;
    std::string detail;
    bool pass = true;
    Clock::time_point t0 = Clock::now();

    explicit Criterion(int n) : id(n) {}
    void require(bool ok, const std::string& what) {
        pass = pass && ok;
        detail += (detail.empty() ? "" : "; ") + what + (ok ? " ok" : " FAILED");
    }
    void finish(double budget_s) {
        double dt = std::chrono::duration<double>(Clock::now() - t0).count();
        bool time_ok = dt < budget_s;
        pass = pass && time_ok;
        std::printf("CRITERION %2d %s  [%.1f s / budget %.0f s]  %s%s\n", id,
                    pass ? "PASS" : "FAIL", dt, budget_s, detail.c_str(),
                    time_ok ? "" : "; RUNTIME OVER BUDGET");
        std::fflush(stdout);
        if (!pass) ++g_failures;
    }
};

std::string num(double v) {
    char b[32];
    std::snprintf(b, sizeof b, "%.2e", v);
    return b;
}

// --- 1: Cauchy projection -------------------------------------------------
void criterion1() {
    Criterion c(1);
    auto mesh16 = make_mesh(make_circle(1.0), 16);
    double res_at_5 = 0;
    for (Complex k : {Complex(1, 0), Complex(5, 0), Complex(10, 0.5)}) {
        Matrix E = assemble_Ek(k, *mesh16);
        double r = cauchy_projection_residual(E, *mesh16);
        if (k == Complex(5, 0)) res_at_5 = r;
        c.require(r < 1e-10, "|E_k^2-I| = " + num(r) + " at k = (" +
                                 std::to_string(k.real()) + "," +
                                 std::to_string(k.imag()) + ")");
    }
    auto mesh32 = make_mesh(make_circle(1.0), 32);
    Matrix E = assemble_Ek(Complex(5, 0), *mesh32);
    double r32 = cauchy_projection_residual(E, *mesh32);
    c.require(r32 <= res_at_5 / 10.0 || r32 < 1e-12,
              "doubling panels: " + num(res_at_5) + " -> " + num(r32) +
                  " (>=10x or roundoff floor)");
    c.finish(10);
}

// --- 2: Hardy splitting ----------------------------------------------------
void criterion2() {
    Criterion c(2);
    auto mesh = make_mesh(make_circle(1.0), 16);
    Complex k(5, 0);
    Matrix E = assemble_Ek(k, *mesh);
    Vector f = plane_wave_trace(k, {1, 0}, *mesh);
    double r1 = (E * f - f).norm() / f.norm();
    c.require(r1 < 1e-9, "plane wave |Ef-f|/|f| = " + num(r1));
    Vector g = point_source_trace(k, {0.3, -0.2}, *mesh);
    double r2 = (E * g + g).norm() / g.norm();
    c.require(r2 < 1e-9, "point source |Ef+f|/|f| = " + num(r2));
    c.finish(10);
}

// --- 3: parameter identity ---------------------------------------------------
void criterion3() {
    Criterion c(3);
    // Draws are admissible and bounded away from the excluded sets
    // (khat in (-inf,0], ehat = -1, mu_hat = -1), and the M-sums/products are
    // evaluated in extended precision so that the measured residual isolates
    // the artifact's double-precision P, P', N, N' entries.
    using LC = std::complex<long double>;
    auto lc = [](Complex z) { return LC(z.real(), z.imag()); };
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> mod(0.5, 1.8), arg(0.35, kPi - 0.35);
    double worst2 = 0, worst3 = 0;
    int taken = 0;
    while (taken < 100) {
        Complex kh = std::polar(mod(rng), arg(rng));
        Complex eh = std::polar(mod(rng), arg(rng));
        Complex mu = kh * kh / eh;
        if (std::abs(mu + 1.0) < 0.5) continue;  // stay off the excluded set
        ++taken;
        auto p = dirac_params_2d(kh, eh);
        LC khl = lc(kh), ehl = lc(eh);
        long double ak = std::abs(khl);
        LC M[4] = {khl, ak, ehl, 1.0L};
        LC kM[4] = {ak, khl, 1.0L, khl / ak};
        for (int i = 0; i < 4; ++i)
            worst2 = std::max(worst2,
                              double(std::abs(lc(p.P[i]) * (kM[i] + M[i]) * lc(p.Pp[i]) -
                                              1.0L)));
        auto q = dirac_params_3d(kh, eh);
        LC ch = 1.0L / khl;
        LC M3[8] = {ch, ch, khl / ehl, khl / ehl, std::conj(khl) / ak,
                    1.0L / ehl, 1.0L, 1.0L};
        LC kM3[8] = {1.0L, 1.0L / ak, ch, ch, 1.0L, 1.0L, ch, ch};
        for (int i = 0; i < 8; ++i)
            worst3 = std::max(worst3,
                              double(std::abs(lc(q.P[i]) * (kM3[i] + M3[i]) *
                                                  lc(q.Pp[i]) -
                                              1.0L)));
    }
    c.require(worst2 < 1e-15, "2D entry-wise max = " + num(worst2));
    c.require(worst3 < 1e-15, "3D entry-wise max = " + num(worst3));
    c.finish(1);
}

// --- 4: end-to-end disk scattering ------------------------------------------
void criterion4() {
    Criterion c(4);
    auto mesh = make_mesh(make_circle(1.0), 32);
    Complex km(5, 0);
    auto sys = assemble_dirac_system(km, 1.5, 2.25, mesh);
    Vec2 dir{1, 0};
    Vector h = solve_direct(sys.A, rhs_plane_wave(km, dir, *mesh, sys.params));
    auto tr = traces_from_density(h, sys.params);
    DiskOracle oracle(1.0, km, 1.5, 2.25, dir, 44);
    double collar = mesh->max_panel_arclength();
    double w_far = 0, w_near = 0;
    auto probe = [&](double r, bool interior) {
        std::vector<Vec2> pts;
        for (int i = 0; i < 90; ++i) {
            double a = 2 * kPi * i / 90 + 0.013;
            pts.push_back({r * std::cos(a), r * std::sin(a)});
        }
        auto u = interior ? eval_U(tr.h_plus, sys.k_plus, *mesh, pts, Region::interior)
                          : eval_U(tr.h_minus, km, *mesh, pts, Region::exterior);
        double w = 0;
        for (size_t i = 0; i < pts.size(); ++i)
            w = std::max(w, std::abs(u[i] - (interior ? oracle.u_plus(pts[i])
                                                      : oracle.u_minus(pts[i]))));
        return w;
    };
    for (double r : {0.2, 0.6, 1.0 - 1.1 * collar}) w_far = std::max(w_far, probe(r, true));
    for (double r : {1.0 + 1.1 * collar, 1.5, 2.2}) w_far = std::max(w_far, probe(r, false));
    for (double r : {1.0 - 0.5 * collar, 1.0 - 0.05 * collar})
        w_near = std::max(w_near, probe(r, true));
    for (double r : {1.0 + 0.5 * collar, 1.0 + 0.05 * collar})
        w_near = std::max(w_near, probe(r, false));
    c.require(w_far < 1e-9, "max |U - oracle| outside collar = " + num(w_far));
    c.require(w_near < 1e-7, "inside collar = " + num(w_near));
    auto jr = transmission_residual(sys, h, dir);
    int nsamp = mesh->n_nodes();
    c.require(nsamp >= 360, "boundary samples = " + std::to_string(nsamp));
    c.require(jr.value_jump < 1e-8, "value jump = " + num(jr.value_jump));
    c.require(jr.deriv_jump < 1e-8, "derivative jump = " + num(jr.deriv_jump));
    c.finish(60);
}

// --- 5: WP truth table -------------------------------------------------------
void criterion5() {
    Criterion c(5);
    double s = std::sqrt(1.1838);
    bool a = wp_region_contains(Complex(1.5, 0), Complex(18, 0), Complex(27, 0));
    bool b = wp_region_contains(Complex(0, s), Complex(18, 0), Complex(0, 18 * s));
    bool d = wp_region_contains(1.0 / Complex(0, s), Complex(0, 18 * s), Complex(18, 0));
    c.require(a, "positive dielectric in");
    c.require(b, "plasmonic in");
    c.require(!d, "reverse plasmonic out");
    c.finish(1);
}

// --- 6: sweep reproduction ---------------------------------------------------
void criterion6() {
    Criterion c(6);
    auto curve = make_starfish();
    SweepOptions opt;
    opt.k_max = 20.0;
    opt.n_samples = 400;
    opt.n_panels = 60;  // 960 nodes
    auto count_flags = [](const std::vector<SweepRecord>& r) {
        int n = 0;
        for (const auto& x : r) n += x.flag ? 1 : 0;
        return n;
    };
    int fpos = count_flags(sweep(MaterialCase::positive_dielectric, curve, opt));
    c.require(fpos == 0, "positive dielectric flags = " + std::to_string(fpos));
    int fpla = count_flags(sweep(MaterialCase::plasmonic, curve, opt));
    c.require(fpla == 0, "plasmonic flags = " + std::to_string(fpla));
    int frev = count_flags(sweep(MaterialCase::reverse_plasmonic, curve, opt));
    c.require(frev >= 10, "reverse plasmonic flags = " + std::to_string(frev));
    c.finish(1800);
}

// --- 7: low-frequency stability ------------------------------------------------
void criterion7() {
    Criterion c(7);
    auto mesh = make_mesh(make_circle(1.0), 16);
    auto s1 = assemble_dirac_system(Complex(1e-6, 0), 1.5, 2.25, mesh);
    auto s2 = assemble_dirac_system(Complex(1e-3, 0), 1.5, 2.25, mesh);
    double c1 = condition_number(s1.A).cond2;
    double c2 = condition_number(s2.A).cond2;
    double ratio = std::max(c1 / c2, c2 / c1);
    c.require(ratio <= 2.0, "cond(1e-6) = " + num(c1) + ", cond(1e-3) = " + num(c2) +
                                ", ratio = " + num(ratio));
    c.finish(60);
}

// --- 8: plasmonic homotopy -----------------------------------------------------
void criterion8() {
    Criterion c(8);
    auto mesh = make_mesh(make_starfish(), 40);
    std::vector<Vec2> probes;
    for (int i = 0; i < 5; ++i) {
        double a = 2 * kPi * i / 5 + 0.11;
        probes.push_back({0.3 * std::cos(a), 0.3 * std::sin(a)});
        probes.push_back({2.0 * std::cos(a), 2.0 * std::sin(a)});
    }
    HomotopyOptions opt;
    opt.steps = 6;
    opt.use_direct = true;
    auto res = homotopy_solve(mesh, Complex(18, 0), -1.1838, {1, 0}, probes, opt);
    c.require(res.probe_diffs.size() >= 4, "path increments recorded");
    bool shrink = true;
    std::string seq;
    for (size_t i = 0; i < res.probe_diffs.size(); ++i) {
        seq += (i ? ", " : "") + num(res.probe_diffs[i]);
        if (i > 0) shrink = shrink && res.probe_diffs[i] <= res.probe_diffs[i - 1] / 5.0;
    }
    c.require(shrink, "probe increments shrink >= 5x per decade: [" + seq + "]");
    c.finish(600);
}

// --- 9: corner exponents --------------------------------------------------------
void criterion9() {
    Criterion c(9);
    auto curve = make_teardrop(kPi / 2);
    auto mesh = make_mesh(curve, 30, Grading::dyadic(16));
    Vec2 dir{1 / std::sqrt(2.0), 1 / std::sqrt(2.0)};

    // positive dielectric at k- = 18: direct solve
    {
        auto sys = assemble_dirac_system(Complex(18, 0), 1.5, 2.25, mesh);
        Vector h = solve_direct(sys.A, rhs_plane_wave(Complex(18, 0), dir, *mesh,
                                                      sys.params));
        auto fit = corner_exponent_fit(h, *mesh);
        double re = 0.5 * (fit.side_a.eta.real() + fit.side_b.eta.real());
        c.require(fit.side_a.ok && fit.side_b.ok, "positive: power-law fit");
        c.require(re > -1.0 && re < 0.0,
                  "positive: Re eta = " + num(re) + " in (-1,0)");
    }
    // Plasmonic and reverse: in the lossless limit both conjugate corner
    // modes t^{-1 +- i xi} coexist (standing log-periodic wave), so the fit
    // is the two-mode model; the mode-dominance sign is read off the first,
    // most absorbing path step (delta = 0.1), where limiting absorption
    // selects the traveling direction.
    double im_plas = 0;
    {
        HomotopyOptions opt;
        opt.steps = 6;
        opt.use_direct = true;
        auto res = homotopy_solve(mesh, Complex(18, 0), -1.1838, dir, {}, opt);
        auto fit = corner_exponent_fit(res.h, *mesh, 3, 14);
        double re = 0.5 * (fit.side_a.eta.real() + fit.side_b.eta.real());
        double im = 0.5 * (std::abs(fit.side_a.eta.imag()) +
                           std::abs(fit.side_b.eta.imag()));
        c.require(std::abs(re + 1.0) <= 0.05,
                  "plasmonic: Re eta = " + num(re) + " within -1 +- 0.05");
        c.require(im > 0.5, "plasmonic: |Im eta| = " + num(im) + " > 0.5");
        auto fit0 = corner_exponent_fit(res.h_first, *mesh, 3, 14);
        im_plas = fit0.side_a.eta.imag() + fit0.side_b.eta.imag();
    }
    {
        HomotopyOptions opt;
        opt.steps = 6;
        opt.use_direct = true;
        opt.reverse_branch = true;
        auto res = homotopy_solve(mesh, Complex(18, 0), -1.0 / 1.1838, dir, {}, opt);
        auto fit = corner_exponent_fit(res.h, *mesh, 3, 14);
        double im = 0.5 * (std::abs(fit.side_a.eta.imag()) +
                           std::abs(fit.side_b.eta.imag()));
        c.require(std::abs(0.5 * (fit.side_a.eta.real() + fit.side_b.eta.real()) + 1.0) <=
                      0.05,
                  "reverse: Re eta within -1 +- 0.05");
        c.require(im > 0.5, "reverse: |Im eta| = " + num(im) + " > 0.5");
        auto fit0 = corner_exponent_fit(res.h_first, *mesh, 3, 14);
        double im_rev = fit0.side_a.eta.imag() + fit0.side_b.eta.imag();
        c.require(im_rev * im_plas < 0,
                  "dominant-mode sign flips: plasmonic " + num(im_plas) +
                      " vs reverse " + num(im_rev));
    }
    c.finish(900);
}

// --- 10: figure-eight formula -----------------------------------------------------
void criterion10() {
    Criterion c(10);
    double worst_exact = 0;
    for (double d : {0.2, -0.6, 0.9}) {
        auto [a, b] = figure_eight(0.0, d);
        worst_exact = std::max(worst_exact, std::abs(a - std::sin(0.5 * kPi * d)));
        worst_exact = std::max(worst_exact, std::abs(b + std::sin(0.5 * kPi * d)));
    }
    c.require(worst_exact == 0.0, "xi = 0 values exact (dev = " + num(worst_exact) + ")");
    double worst_conj = 0;
    for (int i = 0; i <= 200; ++i) {
        double xi = -10.0 + 20.0 * i / 200;
        auto [a, _] = figure_eight(xi, 0.45);
        auto [b, _2] = figure_eight(-xi, 0.45);
        worst_conj = std::max(worst_conj, std::abs(b - std::conj(a)));
    }
    c.require(worst_conj < 1e-15, "conjugate symmetry dev = " + num(worst_conj));
    c.finish(1);
}

// --- 11: Clifford suite -------------------------------------------------------------
void criterion11() {
    Criterion c(11);
    int failures = 0;
    for (int dim : {2, 3}) {
        unsigned n = 1u << dim;
        for (unsigned a = 0; a < n; ++a)
            for (unsigned b = 0; b < n; ++b)
                for (unsigned d = 0; d < n; ++d) {
                    auto ea = Multivector::basis(dim, a);
                    auto eb = Multivector::basis(dim, b);
                    auto ec = Multivector::basis(dim, d);
                    if ((clifford_mul(clifford_mul(ea, eb), ec) -
                         clifford_mul(ea, clifford_mul(eb, ec)))
                            .norm() != 0)
                        ++failures;
                }
        for (unsigned v = 0; v < unsigned(dim); ++v)
            for (unsigned t = 0; t < n; ++t) {
                auto u = Multivector::basis(dim, 1u << v);
                auto w = Multivector::basis(dim, t);
                if ((clifford_mul(u, w) - (lcontract(u, w) + wedge(u, w))).norm() != 0)
                    ++failures;
            }
    }
    c.require(failures == 0, "associativity + uw = u-|w + u^w failures = " +
                                 std::to_string(failures));
    c.finish(1);
}

// --- 12: solver cross-check ---------------------------------------------------------
void criterion12() {
    Criterion c(12);
    auto mesh = make_mesh(make_circle(1.0), 32);
    Complex km(5, 0);
    auto sys = assemble_dirac_system(km, 1.5, 2.25, mesh);
    Vector rhs = rhs_plane_wave(km, {1, 0}, *mesh, sys.params);
    Vector xd = solve_direct(sys.A, rhs);
    GmresOptions go;  // default tol: machine epsilon
    auto g = gmres(sys.A, rhs, go);
    double agree = (g.x - xd).norm() / xd.norm();
    c.require(agree < 1e-10, "direct vs gmres = " + num(agree) + " (iters " +
                                 std::to_string(g.iterations) + ")");
    bool mono = true;
    for (size_t i = 1; i < g.residual_history.size(); ++i)
        mono = mono &&
               g.residual_history[i] <= g.residual_history[i - 1] * (1 + 1e-13);
    c.require(mono, "gmres residual history monotone nonincreasing");
    c.finish(60);
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> run;
    for (int i = 1; i < argc; ++i) run.insert(std::atoi(argv[i]));
    auto want = [&](int n) { return run.empty() || run.count(n); };
    if (want(1)) criterion1();
    if (want(2)) criterion2();
    if (want(3)) criterion3();
    if (want(4)) criterion4();
    if (want(5)) criterion5();
    if (want(6)) criterion6();
    if (want(7)) criterion7();
    if (want(8)) criterion8();
    if (want(9)) criterion9();
    if (want(10)) criterion10();
    if (want(11)) criterion11();
    if (want(12)) criterion12();
    std::printf("acceptance: %d criterion failure(s)\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
