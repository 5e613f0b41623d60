#include <doctest.h>

#include <cmath>
#include <complex>

#include "core/geometry.hpp"
#include "core/fields.hpp"
#include "core/quadrature.hpp"

using namespace dirac2d;

TEST_CASE("gauss-legendre 16: sums, symmetry, degree-31 exactness") {
    const auto& x = gl16_nodes();
    const auto& w = gl16_weights();
    double s = 0;
    for (double wi : w) s += wi;
    CHECK(s == doctest::Approx(2.0).epsilon(1e-15));
    for (int i = 0; i < 16; ++i) CHECK(x[i] == doctest::Approx(-x[15 - i]).epsilon(1e-15));
    // int t^30 dt = 2/31 (degree 31 rule is exact)
    double I = 0;
    for (int i = 0; i < 16; ++i) I += w[i] * std::pow(x[i], 30);
    CHECK(I == doctest::Approx(2.0 / 31.0).epsilon(1e-14));
    // odd powers integrate to zero
    double I31 = 0;
    for (int i = 0; i < 16; ++i) I31 += w[i] * std::pow(x[i], 31);
    CHECK(std::abs(I31) < 1e-16);
}

TEST_CASE("log product weights: f == 1 against the closed-form antiderivative") {
    // int log|t-t0| dt = (1-t0)log|1-t0| + (1+t0)log|1+t0| - 2
    for (double t0 : {0.0, 0.3, -0.77, gl16_nodes()[4], 0.9894}) {
        Row W = log_weights(t0);
        double got = 0;
        for (double wj : W) got += wj;
        double want = (1 - t0) * std::log1p(-t0) + (1 + t0) * std::log1p(t0) - 2.0;
        CHECK(got == doctest::Approx(want).epsilon(1e-14));
    }
}

TEST_CASE("log product weights: polynomial integrands to degree 15") {
    // against adaptive-free closed forms: int t^m log|t-t0| dt computed by
    // monomial recursion from the Cauchy moments
    double t0 = 0.42;
    Row W = log_weights(t0);
    // closed-form monomial log moments via integration by parts:
    // L_m = [t^{m+1}/(m+1) log|t-t0|] - 1/(m+1) int t^{m+1}/(t-t0) dt
    double C[17];
    C[0] = std::log1p(-t0) - std::log1p(t0);  // p.v. log|(1-t0)/(1+t0)|
    for (int m = 1; m <= 16; ++m)
        C[m] = t0 * C[m - 1] + (1.0 - ((m % 2) ? -1.0 : 1.0)) / m;
    for (int m = 0; m <= 15; ++m) {
        // boundary factor (-1)^{m+1} at t = -1
        double bnd = (std::log1p(-t0) - ((m % 2) ? 1.0 : -1.0) * std::log1p(t0)) / (m + 1);
        double L = bnd - C[m + 1] / (m + 1);
        double got = 0;
        for (int j = 0; j < 16; ++j) got += W[j] * std::pow(gl16_nodes()[j], m);
        CHECK(got == doctest::Approx(L).epsilon(5e-14));
    }
}

TEST_CASE("cauchy product weights: principal value of f == 1") {
    // p.v. int dt/(t-t0) = log|1-t0| - log|1+t0|
    for (double t0 : {0.0, 0.5, -0.31, gl16_nodes()[9]}) {
        Row W = cauchy_weights(t0);
        double got = 0;
        for (double wj : W) got += wj;
        CHECK(got == doctest::Approx(std::log1p(-t0) - std::log1p(t0)).epsilon(1e-13));
    }
}

TEST_CASE("adjacent-panel (outside) weights reduce to accurate quadrature") {
    // t0 outside [-1,1]: smooth integrand; compare to dense Gauss reference
    for (double t0 : {1.0106, 1.4, 2.5, -1.2}) {
        Row Wl = log_weights(t0);
        Row Wc = cauchy_weights(t0);
        auto f = [](double t) { return 1.0 / (t + 3.1) + 0.2 * t * t; };
        double gl = 0, gc = 0;
        for (int j = 0; j < 16; ++j) {
            gl += Wl[j] * f(gl16_nodes()[j]);
            gc += Wc[j] * f(gl16_nodes()[j]);
        }
        // reference by composite refinement (integrand smooth on [-1,1])
        double rl = 0, rc = 0;
        int niv = 64;
        for (int p = 0; p < niv; ++p) {
            double a = -1.0 + 2.0 * p / niv, h = 1.0 / niv;
            for (int j = 0; j < 16; ++j) {
                double t = a + h * (gl16_nodes()[j] + 1.0);
                double w = gl16_weights()[j] * h;
                rl += w * f(t) * std::log(std::abs(t - t0));
                rc += w * f(t) / (t - t0);
            }
        }
        CHECK(gl == doctest::Approx(rl).epsilon(1e-12));
        CHECK(gc == doctest::Approx(rc).epsilon(1e-12));
    }
}

TEST_CASE("near weights with complex displacement match dense reference") {
    Complex t0(0.31, 0.043);  // target hovering just off the panel
    Row Wl = log_weights_near(t0);
    CRow Wc = cauchy_weights_near(t0);
    auto f = [](double t) { return std::cos(1.7 * t) + 0.3 * t; };
    double gl = 0;
    Complex gc = 0;
    for (int j = 0; j < 16; ++j) {
        gl += Wl[j] * f(gl16_nodes()[j]);
        gc += Wc[j] * f(gl16_nodes()[j]);
    }
    double rl = 0;
    Complex rc = 0;
    int niv = 256;
    for (int p = 0; p < niv; ++p) {
        double a = -1.0 + 2.0 * p / niv, h = 1.0 / niv;
        for (int j = 0; j < 16; ++j) {
            double t = a + h * (gl16_nodes()[j] + 1.0);
            double w = gl16_weights()[j] * h;
            rl += w * f(t) * std::log(std::abs(t - t0));
            rc += w * f(t) / (t - t0);
        }
    }
    CHECK(gl == doctest::Approx(rl).epsilon(1e-11));
    CHECK(std::abs(gc - rc) < 1e-11);
}

TEST_CASE("panel chart: interpolation and complex root solve") {
    // chart of a circular arc panel
    auto curve = make_circle(1.0);
    CRow vals;
    double a = 0.1, b = 0.15;  // parameter interval
    for (int j = 0; j < 16; ++j) {
        double t = 0.5 * (a + b) + 0.5 * (b - a) * gl16_nodes()[j];
        Vec2 p = curve->position(t);
        vals[j] = Complex(p.x, p.y);
    }
    PanelChart chart(vals);
    // interpolates the chart at an off-node point
    double tm = 0.3;  // canonical coordinate in [-1,1]
    double tparam = 0.5 * (a + b) + 0.5 * (b - a) * tm;
    Vec2 exact = curve->position(tparam);
    Complex got = chart.eval(Complex(tm, 0));
    CHECK(std::abs(got - Complex(exact.x, exact.y)) < 1e-13);
    // solve for a point slightly off the curve: root acquires an imaginary part
    Vec2 offp = curve->position(tparam) * 1.001;
    Complex troot;
    REQUIRE(chart.solve(Complex(offp.x, offp.y), Complex(tm, 0), troot));
    CHECK(std::abs(troot.real() - tm) < 0.05);
    CHECK(std::abs(troot.imag()) > 1e-5);
    // the chart maps the root back to the target
    CHECK(std::abs(chart.eval(troot) - Complex(offp.x, offp.y)) < 1e-12);
}

namespace {

using dirac2d::Complex;

// Laplace double layer of density 1: D(x) = oint <nu(y), y-x>/|y-x|^2 dsigma.
// Gauss identity: 2 pi inside, 0 outside, pi on the (smooth) boundary.
double laplace_double_layer(const Mesh& mesh, Vec2 x, int on_node = -1) {
    const auto& nodes = mesh.nodes();
    const Row& gx = gl16_nodes();
    double total = 0;
    Complex s0_found;
    for (int p = 0; p < int(mesh.panels().size()); ++p) {
        const Panel& pan = mesh.panels()[p];
        double half = 0.5 * (pan.t1 - pan.t0);
        bool self = on_node >= 0 && nodes[on_node].panel == p;
        bool adj = on_node >= 0 && !self && mesh.adjacent(nodes[on_node].panel, p);
        double d2 = 1e300;
        int jmin = 0;
        for (int j = 0; j < 16; ++j) {
            double q = (nodes[pan.first_node + j].pos - x).norm2();
            if (q < d2) { d2 = q; jmin = j; }
        }
        if (self || adj) {
            // real singular parameter: p.v. Cauchy product integration
            double tmid = 0.5 * (pan.t0 + pan.t1);
            double dt = (nodes[on_node].t - tmid) - std::round(nodes[on_node].t - tmid);
            double s0 = dt / half;
            Row WC = cauchy_weights(s0);
            for (int j = 0; j < 16; ++j) {
                const Node& sn = nodes[pan.first_node + j];
                Vec2 d = sn.pos - x;
                Vec2 psi = (pan.first_node + j == on_node)
                               ? sn.tau * (sn.speed * half)
                               : d / (gx[j] - s0);
                total += sn.nu.dot(psi) / psi.norm2() * WC[j] * sn.speed * half;
            }
        } else if (double dist = std::sqrt(d2);
                   dist < pan.arclength &&
                   [&] {  // complex-root near path if a displaced root exists
                       CRow vals;
                       for (int j = 0; j < 16; ++j)
                           vals[j] = to_c(nodes[pan.first_node + j].pos);
                       PanelChart chart(vals);
                       Complex root;
                       bool ok = chart.solve(to_c(x), Complex(gx[jmin], 0), root) &&
                                 std::abs(root.imag()) > 1e-14;
                       if (ok) s0_found = root;
                       return ok;
                   }()) {
            Complex s0 = s0_found;
            CRow WCp = cauchy_weights_near(s0);
            CRow WCm = cauchy_weights_near(std::conj(s0));
            Complex acc = 0;
            for (int j = 0; j < 16; ++j) {
                const Node& sn = nodes[pan.first_node + j];
                Complex dz = to_c(sn.pos - x);
                Complex nuc = to_c(sn.nu);
                Complex sj(gx[j], 0);
                acc += 0.5 * (nuc * (sj - s0) / dz * WCp[j] +
                              std::conj(nuc) * (sj - std::conj(s0)) / std::conj(dz) * WCm[j]) *
                       sn.speed * half;
            }
            total += acc.real();
        } else {
            for (int j = 0; j < 16; ++j) {
                const Node& sn = nodes[pan.first_node + j];
                Vec2 d = sn.pos - x;
                total += sn.nu.dot(d) / d.norm2() * mesh.dsigma(pan.first_node + j);
            }
        }
    }
    return total;
}

}  // namespace

TEST_CASE("Laplace Gauss identity: interior, exterior, near-boundary, on-boundary") {
    for (auto curve : {make_circle(1.3), make_starfish()}) {
        auto mesh = make_mesh(curve, curve->corners().empty() && curve->name() == "starfish" ? 32 : 24);
        CHECK(laplace_double_layer(*mesh, {0.05, -0.1}) ==
              doctest::Approx(2 * kPi).epsilon(1e-12));
        CHECK(std::abs(laplace_double_layer(*mesh, {2.5, 1.0})) < 1e-12);
        // near-boundary targets, both sides (the curve passes near (r(0),0))
        Vec2 bdry = curve->position(0.37);
        Vec2 nrm;
        {
            Vec2 d = curve->derivative(0.37);
            Vec2 tau = d / d.norm();
            nrm = {tau.y, -tau.x};
        }
        double h = 1e-4;
        CHECK(laplace_double_layer(*mesh, bdry - nrm * h) ==
              doctest::Approx(2 * kPi).epsilon(1e-11));
        CHECK(std::abs(laplace_double_layer(*mesh, bdry + nrm * h)) < 1e-11);
        // on-boundary principal value = pi at a node
        int node = 37;
        CHECK(laplace_double_layer(*mesh, mesh->nodes()[node].pos, node) ==
              doctest::Approx(kPi).epsilon(1e-12));
    }
}

TEST_CASE("Laplace single layer of density 1 on a circle") {
    // oint log|y - x| dsigma = 2 pi R log R for |x| < R; test at the center
    double R = 2.0;
    auto mesh = make_mesh(make_circle(R), 16);
    double got = 0;
    for (int j = 0; j < mesh->n_nodes(); ++j)
        got += std::log((mesh->nodes()[j].pos - Vec2{0, 0}).norm()) * mesh->dsigma(j);
    CHECK(got == doctest::Approx(2 * kPi * R * std::log(R)).epsilon(1e-13));
}

TEST_CASE("Helmholtz single layer near the circle matches the Bessel series") {
    // S(x) = oint Phi_k(y-x) dsigma = i pi R J0(kR) H0(k rho), rho = |x| > R
    double R = 1.0;
    Complex k(2.4, 0);
    auto mesh = make_mesh(make_circle(R), 24);
    Kernel kern(k);
    for (double rho : {1.001, 1.0001, 1.3, 2.0}) {
        Vec2 x{rho * std::cos(0.4), rho * std::sin(0.4)};
        int n = mesh->n_nodes();
        Vector one = Vector::Ones(n), zero = Vector::Zero(n);
        LayerVals lv = eval_layers(k, *mesh, x, zero.data(), zero.data(), one.data(),
                                   zero.data(), false);
        Complex got = lv.S1 / (Complex(0, 1) * k);  // strip the ik factor
        Complex want = Complex(0, kPi) * R * besselj01(k * R).j0 * hankel1(0, k * rho);
        CAPTURE(rho);
        CHECK(std::abs(got - want) < 1e-10);
    }
    // continuity under approach: values at 1e-3 and 1e-6 differ by O(distance)
    Vec2 x1{1.0 + 1e-3, 0.0}, x2{1.0 + 1e-6, 0.0};
    int n = mesh->n_nodes();
    Vector one = Vector::Ones(n), zero = Vector::Zero(n);
    Complex v1 = eval_layers(k, *mesh, x1, zero.data(), zero.data(), one.data(),
                             zero.data(), false).S1;
    Complex v2 = eval_layers(k, *mesh, x2, zero.data(), zero.data(), one.data(),
                             zero.data(), false).S1;
    CHECK(std::abs(v1 - v2) < 2e-2 * std::abs(v2));
}

TEST_CASE("plain-rule refinement convergence on a smooth integrand") {
    auto f = [](Vec2 p) { return std::cos(3.0 * p.x) * std::exp(0.5 * p.y); };
    auto integral = [&](int panels) {
        auto mesh = make_mesh(make_starfish(), panels);
        double acc = 0;
        for (int j = 0; j < mesh->n_nodes(); ++j)
            acc += f(mesh->nodes()[j].pos) * mesh->dsigma(j);
        return acc;
    };
    double ref = integral(96);
    double e1 = std::abs(integral(12) - ref);
    double e2 = std::abs(integral(24) - ref);
    CHECK(e2 < e1 / 10.0);
}

TEST_CASE("log weights exact for degree <= 15 at every canonical node") {
    for (int nodei = 0; nodei < 16; ++nodei) {
        double t0 = gl16_nodes()[nodei];
        Row W = log_weights(t0);
        double C[17];
        C[0] = std::log1p(-t0) - std::log1p(t0);
        for (int m = 1; m <= 16; ++m)
            C[m] = t0 * C[m - 1] + (1.0 - ((m % 2) ? -1.0 : 1.0)) / m;
        for (int m = 0; m <= 15; ++m) {
            double bnd =
                (std::log1p(-t0) - ((m % 2) ? 1.0 : -1.0) * std::log1p(t0)) / (m + 1);
            double L = bnd - C[m + 1] / (m + 1);
            double got = 0;
            for (int j = 0; j < 16; ++j) got += W[j] * std::pow(gl16_nodes()[j], m);
            CHECK(got == doctest::Approx(L).epsilon(2e-13));
        }
    }
}
