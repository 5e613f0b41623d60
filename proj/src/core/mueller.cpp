#include "mueller.hpp"

#include <cmath>

#include "quadrature.hpp"

namespace dirac2d {

namespace {

// Even-entire helper series for the T+ - T- kernel split. q = (z/2)^2.
// e1(z)  = 2 J1(z)/z, e1d(z) = e1'(z)/z,
// T1(z)  = sum (-1)^m (H_m + H_{m+1}) q^m / (m!(m+1)!), T1d = T1'(z)/z.
struct EvenSeries {
    Complex e1, e1d, T1, T1d;
};

EvenSeries even_series(Complex z) {
    static double H[42];
    static bool init = [] {
        H[0] = 0;
        for (int m = 1; m <= 41; ++m) H[m] = H[m - 1] + 1.0 / m;
        return true;
    }();
    (void)init;
    const Complex q = 0.25 * z * z;
    EvenSeries s{1.0, 0.0, H[1], 0.0};
    Complex cm = 1.0;  // (-1)^m q^m / (m!(m+1)!)
    for (int m = 1; m <= 40; ++m) {
        Complex cprev = cm;
        cm *= -q / double(m * (m + 1));
        s.e1 += cm;
        s.T1 += cm * (H[m] + H[m + 1]);
        // m q^{m-1}/2 terms, written q-free via the previous coefficient
        Complex dterm = -0.5 * cprev / double(m + 1);
        s.e1d += dterm;
        s.T1d += dterm * (H[m] + H[m + 1]);
        if (std::norm(cm) < 1e-36 && m > 4) break;
    }
    return s;
}

// Smooth split of the radial factor g_k(r) (grad_y G_k = g_k(r)(y-x)):
//   g_k(r) = -1/(2 pi r^2) + log(r) alpha_k(r) + beta_k(r),
// with alpha, beta even entire; plus the ratio derivatives needed for
// T = -g'(r)/r Pi - g(r) <nu_x, nu_y>:
//   alpha_k(r)/  = (k^2/4pi) e1(kr),      alpha_k'(r)/r = (k^4/4pi) e1d(kr),
//   beta_k(r) = (k^2/4)(L/pi - i/2) e1 - (k^2/8pi) T1,  beta' likewise.
struct GSplit {
    Complex alpha, alphad, beta, betad;  // alphad = alpha'(r)/r etc.
};

GSplit g_split(Complex k, Complex L, double r) {
    EvenSeries s = even_series(k * r);
    GSplit g;
    Complex k2 = k * k, k4 = k2 * k2;
    Complex lg = L / kPi - Complex(0, 0.5);
    g.alpha = k2 / (4 * kPi) * s.e1;
    g.alphad = k4 / (4 * kPi) * s.e1d;
    g.beta = 0.25 * k2 * lg * s.e1 - k2 / (8 * kPi) * s.T1;
    g.betad = 0.25 * k4 * lg * s.e1d - k4 / (8 * kPi) * s.T1d;
    return g;
}

}  // namespace

MuellerSystem assemble_mueller(Complex k_minus, Complex k_hat, Complex eps_hat,
                               std::shared_ptr<const Mesh> mesh) {
    MuellerSystem sys;
    sys.mesh = mesh;
    sys.k_minus = k_minus;
    sys.k_plus = k_minus * k_hat;
    sys.eps_hat = eps_hat;
    const int n = mesh->n_nodes();
    const Complex kp = sys.k_plus, km = k_minus;

    // D, S, S' read off the assembled Cauchy operators:
    //   E(0,0) = -K^{nu'},  E(0,2) = S^1 = ik S_Phi,  E(2,2) = -K^{nu}
    //   D_k = K^{nu'}/2, S_k = S^1/(2ik), S'_k = -K^{nu}/2   (G = Phi/2).
    Matrix Ep = assemble_Ek(kp, *mesh);
    Matrix Em = assemble_Ek(km, *mesh);
    auto blk = [n](const Matrix& E, int r, int c) { return E.block(r * n, c * n, n, n); };

    sys.A = Matrix::Zero(2 * n, 2 * n);
    sys.A.block(0, 0, n, n) = Matrix::Identity(n, n) +
                              (-0.5) * blk(Ep, 0, 0) - (-0.5) * blk(Em, 0, 0);
    sys.A.block(0, n, n, n) = blk(Em, 0, 2) / (2.0 * Complex(0, 1) * km * eps_hat) -
                              blk(Ep, 0, 2) / (2.0 * Complex(0, 1) * kp);
    // S'_k = -K^nu/2 = E(2,2)/2; the row reads  ... + S'-/ehat - S'+
    sys.A.block(n, n, n, n) = 0.5 * (1.0 + 1.0 / eps_hat) * Matrix::Identity(n, n) +
                              0.5 * blk(Em, 2, 2) / eps_hat - 0.5 * blk(Ep, 2, 2);

    // T+ - T- : log-singular difference of hypersingular operators.
    const Complex Lp = std::log(0.5 * kp) + kEulerGamma;
    const Complex Lm = std::log(0.5 * km) + kEulerGamma;
    const auto& nodes = mesh->nodes();
    const auto& panels = mesh->panels();
    const Row& gx = gl16_nodes();

    parallel_for(int(panels.size()), [&](int p) {
        const Panel& pan = panels[p];
        const double half = 0.5 * (pan.t1 - pan.t0);
        const double tmid = 0.5 * (pan.t0 + pan.t1);
        for (int i = 0; i < n; ++i) {
            const Node& tn = nodes[i];
            bool sing = false;
            double s0 = 0;
            int diag_j = -1;
            if (tn.panel == p) {
                sing = true;
                diag_j = i - pan.first_node;
                s0 = gx[diag_j];
            } else if (mesh->adjacent(tn.panel, p)) {
                double dt = (tn.t - tmid) - std::round(tn.t - tmid);
                s0 = dt / half;
                sing = std::abs(s0) <= 4.0;
            }
            Row WL{};
            if (sing) WL = log_weights(s0);
            for (int j = 0; j < kPanelOrder; ++j) {
                const Node& sn = nodes[pan.first_node + j];
                int gj = pan.first_node + j;
                double ds = mesh->dsigma(gj);
                Vec2 d = sn.pos - tn.pos;
                double r = d.norm();
                Complex val;
                if (!sing) {
                    // direct difference of the two radial factors
                    auto gseg = [&](Complex kk, double rr) {
                        HankelPair h = hankel1_pair(kk * rr);
                        Complex g = -Complex(0, 0.25) * kk * h.h1 / rr;
                        // g'(r) = -(i kk/4)[kk H0/r - 2 H1/r^2]
                        Complex gp = -Complex(0, 0.25) * kk *
                                     (kk * h.h0 / rr - 2.0 * h.h1 / (rr * rr));
                        return std::pair<Complex, Complex>(g, gp);
                    };
                    auto [gp1, gp1d] = gseg(kp, r);
                    auto [gm1, gm1d] = gseg(km, r);
                    double Pi = tn.nu.dot(d) * sn.nu.dot(d);
                    val = -(gp1d - gm1d) / r * Pi - (gp1 - gm1) * tn.nu.dot(sn.nu);
                    val *= ds;
                } else {
                    GSplit gp = g_split(kp, Lp, r), gm = g_split(km, Lm, r);
                    Complex dal = gp.alpha - gm.alpha, dald = gp.alphad - gm.alphad;
                    Complex dbe = gp.beta - gm.beta, dbed = gp.betad - gm.betad;
                    double nn = tn.nu.dot(sn.nu);
                    double Pi, Pi_r2, lnratio;
                    if (j == diag_j) {
                        Pi = 0;
                        Pi_r2 = 0;
                        lnratio = std::log(tn.speed * half);
                    } else {
                        Vec2 psi = d / (gx[j] - s0);
                        Pi = tn.nu.dot(d) * sn.nu.dot(d);
                        Pi_r2 = tn.nu.dot(psi) * sn.nu.dot(psi) / psi.norm2();
                        lnratio = std::log(r / std::abs(gx[j] - s0));
                    }
                    Complex lam = -(dald * Pi + dal * nn);
                    Complex sm = -(dal * Pi_r2 + dbed * Pi + dbe * nn);
                    val = lam * (WL[j] * sn.speed * half + lnratio * ds) + sm * ds;
                }
                sys.A(n + i, gj) += val;
            }
        }
    });
    return sys;
}

Vector mueller_rhs_plane_wave(const MuellerSystem& sys, Vec2 direction) {
    const Mesh& mesh = *sys.mesh;
    const int n = mesh.n_nodes();
    Vector b(2 * n);
    const Complex ik = Complex(0, 1) * sys.k_minus;
    for (int j = 0; j < n; ++j) {
        const Node& nd = mesh.nodes()[j];
        Complex u0 = std::exp(ik * direction.dot(nd.pos));
        b[j] = u0;
        b[n + j] = ik * direction.dot(nd.nu) * u0;
    }
    return b;
}

std::vector<Complex> mueller_eval_U(const MuellerSystem& sys, const Vector& phi_psi,
                                    Vec2 direction, const std::vector<Vec2>& points,
                                    Region region) {
    const Mesh& mesh = *sys.mesh;
    const int n = mesh.n_nodes();
    const Complex ik = Complex(0, 1) * sys.k_minus;
    Vector zero = Vector::Zero(n), h1(n), h3(n);
    Complex k = (region == Region::interior) ? sys.k_plus : sys.k_minus;
    if (region == Region::interior) {
        // U+ = S+ psi - W+ phi = (1/2) [ S^1_{k+}/(ik+) psi - K~^{nu'} phi ]
        for (int j = 0; j < n; ++j) {
            h1[j] = -phi_psi[j];
            h3[j] = phi_psi[n + j];
        }
    } else {
        // U- = W-(phi - u0) - S-(psi/ehat - dnu u0)
        for (int j = 0; j < n; ++j) {
            const Node& nd = mesh.nodes()[j];
            Complex u0 = std::exp(ik * direction.dot(nd.pos));
            h1[j] = phi_psi[j] - u0;
            h3[j] = -(phi_psi[n + j] / sys.eps_hat - ik * direction.dot(nd.nu) * u0);
        }
    }
    std::vector<Complex> out(points.size());
    parallel_for(int(points.size()), [&](int i) {
        LayerVals lv =
            eval_layers(k, mesh, points[i], h1.data(), zero.data(), h3.data(), zero.data(),
                        false);
        // W g = K~^{nu'} g / 2, S g = S~^1 g / (2ik)
        out[i] = 0.5 * lv.Knu + lv.S1 / (2.0 * Complex(0, 1) * k);
    });
    return out;
}

}  // namespace dirac2d
