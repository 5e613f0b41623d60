#include <doctest.h>

#include <cmath>

#include "core/fields.hpp"
#include "core/quadrature.hpp"
#include "core/solver.hpp"

using namespace dirac2d;

namespace {

std::vector<Vec2> ring(double r, int n, double phase = 0.1) {
    std::vector<Vec2> pts(n);
    for (int i = 0; i < n; ++i) {
        double a = 2 * kPi * i / n + phase;
        pts[i] = {r * std::cos(a), r * std::sin(a)};
    }
    return pts;
}

}  // namespace

TEST_CASE("traces: definition, zero, linearity") {
    auto par = dirac_params_2d(Complex(1.2, 0.3), Complex(2.0, 0.1));
    int n = 3;
    Vector h = Vector::Random(4 * n);
    auto tr = traces_from_density(h, par);
    for (int c = 0; c < 4; ++c)
        for (int j = 0; j < n; ++j) {
            CHECK(std::abs(tr.h_plus[c * n + j] - par.Np[c] * h[c * n + j]) < 1e-15);
            CHECK(std::abs(tr.h_minus[c * n + j] - par.Pp[c] * h[c * n + j]) < 1e-15);
        }
    auto tz = traces_from_density(Vector::Zero(4 * n), par);
    CHECK(tz.h_plus.norm() == 0.0);
    auto t2 = traces_from_density(Vector(2.0 * h), par);
    CHECK((t2.h_plus - 2.0 * tr.h_plus).norm() < 1e-14);
}

TEST_CASE("transparent scene: U+ equals the incident wave, U- vanishes") {
    auto mesh = make_mesh(make_circle(1.0), 16);
    Complex km(3, 0);
    auto sys = assemble_dirac_system(km, 1.0, 1.0, mesh);
    Vec2 dir{1 / std::sqrt(2.0), 1 / std::sqrt(2.0)};
    Vector rhs = rhs_plane_wave(km, dir, *mesh, sys.params);
    Vector h = solve_direct(sys.A, rhs);
    auto tr = traces_from_density(h, sys.params);

    auto pts_in = ring(0.55, 40);
    auto ui = eval_U(tr.h_plus, sys.k_plus, *mesh, pts_in, Region::interior);
    double worst = 0;
    for (size_t i = 0; i < pts_in.size(); ++i) {
        Complex u0 = std::exp(Complex(0, 1) * km * dir.dot(pts_in[i]));
        worst = std::max(worst, std::abs(ui[i] - u0));
    }
    CHECK(worst < 1e-10);

    auto pts_out = ring(1.7, 40);
    auto ue = eval_U(tr.h_minus, km, *mesh, pts_out, Region::exterior);
    for (auto v : ue) CHECK(std::abs(v) < 1e-10);

    // region check fires for a wrong-side point
    CHECK_THROWS_AS(eval_U(tr.h_plus, sys.k_plus, *mesh, ring(1.7, 3), Region::interior),
                    std::domain_error);
}

TEST_CASE("disk oracle: construction residual, degenerate case, decay") {
    DiskOracle oracle(1.0, Complex(5, 0), Complex(1.5, 0), Complex(2.25, 0),
                      {1, 0}, 40);
    CHECK(oracle.boundary_residual(360) < 1e-12);
    CHECK(oracle.flagged_modes().empty());
    // coefficients decay superexponentially past n ~ k R
    const auto& b = oracle.scattered_coeffs();
    CHECK(std::abs(b[39]) < 1e-20);
    CHECK(std::abs(b[20]) < 1e-8 * std::abs(b[0]));

    DiskOracle trivial(1.0, Complex(4, 0), Complex(1, 0), Complex(1, 0), {1, 0}, 30);
    for (int n = 0; n < 10; ++n) CHECK(std::abs(trivial.scattered_coeffs()[n]) < 1e-13);
    Vec2 p{0.3, 0.2};
    CHECK(std::abs(trivial.u_plus(p) - trivial.incident(p)) < 1e-13);
}

TEST_CASE("end-to-end disk scattering matches the separation-of-variables oracle") {
    // positive dielectric: k- = 5, khat = 1.5, ehat = 2.25, 32 panels
    auto mesh = make_mesh(make_circle(1.0), 32);
    Complex km(5, 0);
    auto sys = assemble_dirac_system(km, 1.5, 2.25, mesh);
    Vec2 dir{1, 0};
    Vector rhs = rhs_plane_wave(km, dir, *mesh, sys.params);
    Vector h = solve_direct(sys.A, rhs);
    auto tr = traces_from_density(h, sys.params);
    DiskOracle oracle(1.0, km, 1.5, 2.25, dir, 40);

    // far from the boundary (outside the one-panel collar)
    double collar = mesh->max_panel_arclength();
    double w_in = 0, w_out = 0, w_near = 0;
    for (double r : {0.15, 0.5, 0.8, 1.0 - 1.2 * collar}) {
        auto pts = ring(r, 60);
        auto u = eval_U(tr.h_plus, sys.k_plus, *mesh, pts, Region::interior);
        for (size_t i = 0; i < pts.size(); ++i)
            w_in = std::max(w_in, std::abs(u[i] - oracle.u_plus(pts[i])));
    }
    for (double r : {1.0 + 1.2 * collar, 1.5, 2.5}) {
        auto pts = ring(r, 60);
        auto u = eval_U(tr.h_minus, km, *mesh, pts, Region::exterior);
        for (size_t i = 0; i < pts.size(); ++i)
            w_out = std::max(w_out, std::abs(u[i] - oracle.u_minus(pts[i])));
    }
    CHECK(w_in < 1e-9);
    CHECK(w_out < 1e-9);

    // inside the collar (near-field quadrature)
    for (double r : {1.0 - 0.02 * collar, 1.0 - 0.3 * collar}) {
        auto pts = ring(r, 60);
        auto u = eval_U(tr.h_plus, sys.k_plus, *mesh, pts, Region::interior);
        for (size_t i = 0; i < pts.size(); ++i)
            w_near = std::max(w_near, std::abs(u[i] - oracle.u_plus(pts[i])));
    }
    for (double r : {1.0 + 0.02 * collar, 1.0 + 0.3 * collar}) {
        auto pts = ring(r, 60);
        auto u = eval_U(tr.h_minus, km, *mesh, pts, Region::exterior);
        for (size_t i = 0; i < pts.size(); ++i)
            w_near = std::max(w_near, std::abs(u[i] - oracle.u_minus(pts[i])));
    }
    CHECK(w_near < 1e-7);
}

TEST_CASE("gradient evaluation: finite differences and the PDE residual") {
    auto mesh = make_mesh(make_circle(1.0), 24);
    Complex km(2, 0);
    auto sys = assemble_dirac_system(km, 1.5, 2.25, mesh);
    Vec2 dir{0, 1};
    Vector h = solve_direct(sys.A, rhs_plane_wave(km, dir, *mesh, sys.params));
    auto tr = traces_from_density(h, sys.params);

    auto probes = ring(0.5, 8);
    auto grads = eval_gradU(tr.h_plus, sys.k_plus, *mesh, probes, Region::interior);
    double hstep = 1e-5;
    for (size_t i = 0; i < probes.size(); ++i) {
        Vec2 p = probes[i];
        std::vector<Vec2> st = {{p.x + hstep, p.y}, {p.x - hstep, p.y},
                                {p.x, p.y + hstep}, {p.x, p.y - hstep}, p};
        auto u = eval_U(tr.h_plus, sys.k_plus, *mesh, st, Region::interior, false);
        Complex ux = (u[0] - u[1]) / (2 * hstep), uy = (u[2] - u[3]) / (2 * hstep);
        CHECK(std::abs(ux - grads[i].x) < 1e-6);
        CHECK(std::abs(uy - grads[i].y) < 1e-6);
        // Helmholtz residual via the second differences
        Complex lap = (u[0] + u[1] + u[2] + u[3] - 4.0 * u[4]) / (hstep * hstep);
        CHECK(std::abs(lap + sys.k_plus * sys.k_plus * u[4]) /
                  std::abs(sys.k_plus * sys.k_plus * u[4]) <
              1e-5);
    }

    // transparent case: grad U+ = ik d u0
    auto sys1 = assemble_dirac_system(km, 1.0, 1.0, mesh);
    Vector h1 = solve_direct(sys1.A, rhs_plane_wave(km, dir, *mesh, sys1.params));
    auto tr1 = traces_from_density(h1, sys1.params);
    auto g1 = eval_gradU(tr1.h_plus, km, *mesh, probes, Region::interior);
    for (size_t i = 0; i < probes.size(); ++i) {
        Complex u0 = std::exp(Complex(0, 1) * km * dir.dot(probes[i]));
        CVec2 want = dir * (Complex(0, 1) * km * u0);
        CHECK((g1[i] - want).norm() < 1e-9);
    }
}

TEST_CASE("exterior field carries the radiating 1/sqrt(r) decay") {
    auto mesh = make_mesh(make_circle(1.0), 24);
    Complex km(2, 0);
    auto sys = assemble_dirac_system(km, 1.5, 2.25, mesh);
    Vector h = solve_direct(sys.A, rhs_plane_wave(km, {1, 0}, *mesh, sys.params));
    auto tr = traces_from_density(h, sys.params);
    double r1 = 40, r2 = 160;
    auto u1 = eval_U(tr.h_minus, km, *mesh, {{r1, 0.3}}, Region::exterior);
    auto u2 = eval_U(tr.h_minus, km, *mesh, {{r2, 0.3}}, Region::exterior);
    double ratio = std::abs(u1[0]) / std::abs(u2[0]);
    CHECK(ratio == doctest::Approx(std::sqrt(r2 / r1)).epsilon(0.02));
}

TEST_CASE("transmission jump residual from the Hardy-projection traces") {
    auto mesh = make_mesh(make_circle(1.0), 24);
    Complex km(3, 0);
    auto sys = assemble_dirac_system(km, 1.5, Complex(2.25, 0), mesh);
    Vec2 dir{1, 0};
    Vector h = solve_direct(sys.A, rhs_plane_wave(km, dir, *mesh, sys.params));
    auto r = transmission_residual(sys, h, dir);
    CHECK(r.value_jump < 1e-9);
    CHECK(r.deriv_jump < 1e-8);
}

TEST_CASE("grid_eval: tags, collar flags, oracle agreement on the disk scene") {
    auto mesh = make_mesh(make_circle(1.0), 32);
    Complex km(5, 0);
    auto sys = assemble_dirac_system(km, 1.5, 2.25, mesh);
    Vec2 dir{1, 0};
    Vector h = solve_direct(sys.A, rhs_plane_wave(km, dir, *mesh, sys.params));
    GridSpec spec{-1.5, 1.5, -1.5, 1.5, 40, 40, false};
    FieldGrid g = grid_eval(sys, h, spec);
    DiskOracle oracle(1.0, km, 1.5, 2.25, dir, 40);
    double w_far = 0, w_near = 0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            int idx = j * g.nx + i;
            Vec2 p{g.xmin + (g.xmax - g.xmin) * (i + 0.5) / g.nx,
                   g.ymin + (g.ymax - g.ymin) * (j + 0.5) / g.ny};
            REQUIRE(g.tag[idx] == (p.norm() < 1.0 ? 1 : 0));
            Complex want = g.tag[idx] ? oracle.u_plus(p) : oracle.u_minus(p);
            double err = std::abs(g.U[idx] - want);
            (g.collar[idx] ? w_near : w_far) = std::max(g.collar[idx] ? w_near : w_far, err);
        }
    CHECK(w_far < 1e-9);
    CHECK(w_near < 1e-7);
}

TEST_CASE("corner exponent fit recovers a synthetic power law") {
    auto mesh = make_mesh(make_teardrop(kPi / 2), 12, Grading::dyadic(16));
    int n = mesh->n_nodes();
    Vector h = Vector::Zero(4 * n);
    Complex eta(-0.37, 0.9);
    // distance to the corner along the curve, both sides
    std::vector<double> s(n, 0.0);
    {
        double acc = 0;
        for (const auto& pan : mesh->panels()) {
            for (int j = 0; j < kPanelOrder; ++j) {
                int gj = pan.first_node + j;
                acc += 0.5 * mesh->dsigma(gj);
                s[gj] = acc;
                acc += 0.5 * mesh->dsigma(gj);
            }
        }
        double total = mesh->total_arclength();
        for (int j = 0; j < n; ++j) s[j] = std::min(s[j], total - s[j]);
    }
    for (int j = 0; j < n; ++j)
        h[2 * n + j] = std::exp(eta * std::log(s[j]));  // s^eta
    auto fit = corner_exponent_fit(h, *mesh);
    CHECK(fit.side_a.ok);
    CHECK(fit.side_b.ok);
    CHECK(std::abs(fit.side_a.eta - eta) < 1e-6);
    CHECK(std::abs(fit.side_b.eta - eta) < 1e-6);

    auto smooth = make_mesh(make_circle(1.0), 8);
    CHECK_THROWS(corner_exponent_fit(Vector::Zero(4 * smooth->n_nodes()), *smooth));
}

TEST_CASE("far-field reciprocity on the disk under direction reversal") {
    auto mesh = make_mesh(make_circle(1.0), 24);
    Complex km(2.5, 0);
    double R = 40.0;
    auto scattered_at = [&](double inc_angle, double obs_angle) {
        Vec2 dir{std::cos(inc_angle), std::sin(inc_angle)};
        auto sys = assemble_dirac_system(km, 1.5, 2.25, mesh);
        Vector h = solve_direct(sys.A, rhs_plane_wave(km, dir, *mesh, sys.params));
        auto tr = traces_from_density(h, sys.params);
        Vec2 obs{R * std::cos(obs_angle), R * std::sin(obs_angle)};
        return eval_U(tr.h_minus, km, *mesh, {obs}, Region::exterior)[0];
    };
    // pattern(phi; phi0) == pattern(phi0; phi)
    Complex a = scattered_at(0.0, 2.1);
    Complex b = scattered_at(2.1, 0.0);
    CHECK(std::abs(a - b) / std::abs(a) < 1e-8);
}
