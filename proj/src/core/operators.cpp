#include "operators.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

#include "quadrature.hpp"

namespace dirac2d {

namespace {
std::atomic<bool> g_inject_row2{false};
}

void set_ek_row2_sign_injection(bool enabled) { g_inject_row2 = enabled; }
bool ek_row2_sign_injection() { return g_inject_row2; }

DiracParams2D dirac_params_2d(Complex k_hat, Complex eps_hat) {
    if (k_hat.imag() == 0.0 && k_hat.real() <= 0.0)
        throw std::domain_error("dirac_params_2d: k_hat on the excluded ray (-inf, 0]");
    if (eps_hat == Complex(-1.0, 0.0))
        throw std::domain_error("dirac_params_2d: eps_hat = -1 is excluded");
    const double ak = std::abs(k_hat);
    const Complex sfac = 1.0 / std::sqrt(k_hat + ak);  // principal branch
    const Complex pfac = 1.0 / (k_hat + ak);
    DiracParams2D p;
    p.k_hat = k_hat;
    p.eps_hat = eps_hat;
    p.P = {sfac, sfac, 1.0 / (eps_hat + 1.0), 1.0};
    p.Pp = {sfac, sfac, 1.0, ak * pfac};
    p.N = {k_hat * sfac, ak * sfac, eps_hat / (eps_hat + 1.0), 1.0};
    p.Np = {ak * sfac, k_hat * sfac, 1.0, k_hat * pfac};
    return p;
}

DiracParams3D dirac_params_3d(Complex k_hat, Complex eps_hat) {
    if (k_hat.imag() == 0.0 && k_hat.real() <= 0.0)
        throw std::domain_error("dirac_params_3d: k_hat on the excluded ray (-inf, 0]");
    if (eps_hat == Complex(-1.0, 0.0))
        throw std::domain_error("dirac_params_3d: eps_hat = -1 is excluded");
    const Complex mu_hat = k_hat * k_hat / eps_hat;
    if (mu_hat == Complex(-1.0, 0.0))
        throw std::domain_error("dirac_params_3d: mu_hat = k_hat^2/eps_hat = -1 is excluded");
    const Complex c = 1.0 / k_hat;  // "c hat"
    const double ac = std::abs(c);
    const Complex sq = std::sqrt(c);               // principal
    const Complex sfac = 1.0 / std::sqrt(c + ac);  // (chat+|chat|)^{-1/2}
    DiracParams3D p;
    p.k_hat = k_hat;
    p.eps_hat = eps_hat;
    p.mu_hat = mu_hat;
    const Complex mfac = 1.0 / ((mu_hat + 1.0) * sq);
    p.P = {1.0 / (c + 1.0), sfac, mfac,
           mfac,            ac / (c + ac), eps_hat / (eps_hat + 1.0), 1.0, 1.0};
    p.Pp = {1.0, sfac, 1.0 / sq, 1.0 / sq, 1.0, 1.0, 1.0 / (c + 1.0), 1.0 / (c + 1.0)};
    p.N = {c / (c + 1.0), c * sfac, mu_hat / (mu_hat + 1.0) * sq,
           mu_hat / (mu_hat + 1.0) * sq, c / (c + ac), 1.0 / (eps_hat + 1.0), 1.0, 1.0};
    p.Np = {1.0, ac * sfac, sq, sq, 1.0, 1.0, c / (c + 1.0), c / (c + 1.0)};
    return p;
}

namespace {

constexpr double kAdjacentParamReach = 4.0;  // canonical |s0| cutoff for neighbors
constexpr double kNearFactor = 1.0;          // near zone: one panel arclength

struct BlockWriter {
    Matrix* A;
    int nT, nS;                 // targets, source nodes (local counts)
    int row0, col0;             // local target index, local source node index
    std::array<Complex, 4> rs, cs;
    Complex pre;
    bool inject;

    inline void write(const Complex k_nu_s, const Complex k_tau_s, const Complex k_nu_t,
                      const Complex k_tau_t, const Complex sbase, double a_nn, double a_nt,
                      double a_tn, double a_tt) const {
        Matrix& M = *A;
        auto put = [&](int c, int cp, Complex v) {
            M(c * nT + row0, cp * nS + col0) += pre * rs[c] * cs[cp] * v;
        };
        put(0, 0, -k_nu_s);
        put(0, 1, -k_tau_s);
        put(0, 2, sbase);
        put(1, 0, inject ? -k_tau_s : k_tau_s);
        put(1, 1, -k_nu_s);
        put(1, 3, sbase);
        put(2, 0, a_nn * sbase);
        put(2, 1, a_nt * sbase);
        put(2, 2, -k_nu_t);
        put(2, 3, k_tau_t);
        put(3, 0, a_tn * sbase);
        put(3, 1, a_tt * sbase);
        put(3, 2, -k_tau_t);
        put(3, 3, -k_nu_t);
    }
};

double wrap_half(double dt) { return dt - std::round(dt); }

// Shared endpoint of two adjacent panels is a corner parameter?
bool shares_corner(const Mesh& mesh, int pa, int pb) {
    const auto& corners = mesh.curve().corners();
    if (corners.empty()) return false;
    const auto& A = mesh.panels()[pa];
    const auto& B = mesh.panels()[pb];
    for (double c : corners) {
        for (double e : {A.t0, A.t1}) {
            if (std::abs(wrap_half(e - c)) < 1e-14) {
                // endpoint e is a corner; adjacent iff it is also B's endpoint
                if (std::abs(wrap_half(B.t0 - e)) < 1e-14 ||
                    std::abs(wrap_half(B.t1 - e)) < 1e-14)
                    return true;
            }
        }
    }
    return false;
}

}  // namespace

void assemble_ek_multi(const std::vector<EkContribution>& contribs, const Mesh& mesh,
                       int tbegin, int tend, int pbegin, int pend, Matrix& into) {
    const int nc = int(contribs.size());
    std::vector<Kernel> kerns;
    std::vector<Complex> iks;
    kerns.reserve(nc);
    for (const auto& c : contribs) {
        if (c.k == Complex(0, 0))
            throw std::domain_error("assemble_Ek: k = 0 (use the low-frequency limit path)");
        if (c.k.imag() < -1e-12) throw std::domain_error("assemble_Ek: Im k must be >= 0");
        kerns.emplace_back(c.k);
        iks.push_back(Complex(0, 1) * c.k);
    }
    const auto& nodes = mesh.nodes();
    const auto& panels = mesh.panels();
    const int nT = tend - tbegin;
    const int nS = (pend - pbegin) * kPanelOrder;
    if (into.rows() != 4 * nT || into.cols() != 4 * nS)
        throw std::invalid_argument("assemble_ek_multi: bad output shape");

    const Row& gx = gl16_nodes();
    const bool inject = g_inject_row2.load();

    // Panel charts for the complex-root near path.
    std::vector<PanelChart> charts(pend - pbegin);
    for (int p = pbegin; p < pend; ++p) {
        CRow vals;
        for (int j = 0; j < kPanelOrder; ++j)
            vals[j] = to_c(nodes[panels[p].first_node + j].pos);
        charts[p - pbegin] = PanelChart(vals);
    }

    parallel_for(pend - pbegin, [&](int plocal) {
        const int p = pbegin + plocal;
        const Panel& pan = panels[p];
        const double half = 0.5 * (pan.t1 - pan.t0);
        const double tmid = 0.5 * (pan.t0 + pan.t1);
        std::vector<BlockWriter> bws(nc);
        for (int c = 0; c < nc; ++c)
            bws[c] = BlockWriter{&into, nT, nS, 0, 0, contribs[c].row_scale,
                                 contribs[c].col_scale, contribs[c].prefactor, inject};

        for (int ti = tbegin; ti < tend; ++ti) {
            const Node& tn = nodes[ti];
            const Vec2 x = tn.pos;
            for (int c = 0; c < nc; ++c) bws[c].row0 = ti - tbegin;

            enum class Mode { Far, RealSing, ComplexNear } mode = Mode::Far;
            Complex s0{};
            int diag_j = -1;

            if (tn.panel == p) {
                mode = Mode::RealSing;
                diag_j = ti - pan.first_node;
                s0 = gx[diag_j];
            } else if (mesh.adjacent(tn.panel, p) && !shares_corner(mesh, tn.panel, p)) {
                double ds = wrap_half(tn.t - tmid) / half;
                if (std::abs(ds) <= kAdjacentParamReach) {
                    mode = Mode::RealSing;
                    s0 = ds;
                }
            } else {
                double d2 = 1e300;
                int jmin = 0;
                for (int j = 0; j < kPanelOrder; ++j) {
                    double q = (nodes[pan.first_node + j].pos - x).norm2();
                    if (q < d2) {
                        d2 = q;
                        jmin = j;
                    }
                }
                if (std::sqrt(d2) < kNearFactor * pan.arclength) {
                    Complex root;
                    if (charts[plocal].solve(to_c(x), Complex(gx[jmin], 0), root) &&
                        std::abs(root.imag()) > 1e-14) {
                        mode = Mode::ComplexNear;
                        s0 = root;
                    }
                }
            }

            if (mode == Mode::Far) {
                for (int j = 0; j < kPanelOrder; ++j) {
                    const Node& sn = nodes[pan.first_node + j];
                    Vec2 d = sn.pos - x;
                    double ds = mesh.dsigma(pan.first_node + j);
                    double a_nn = tn.nu.dot(sn.nu), a_nt = tn.nu.dot(sn.tau);
                    double a_tn = tn.tau.dot(sn.nu), a_tt = tn.tau.dot(sn.tau);
                    for (int c = 0; c < nc; ++c) {
                        Kernel::Vals v = kerns[c].eval(d);
                        Complex sbase = iks[c] * v.phi * ds;
                        bws[c].col0 = plocal * kPanelOrder + j;
                        bws[c].write(v.grad.dot(sn.nu) * ds, v.grad.dot(sn.tau) * ds,
                                     v.grad.dot(tn.nu) * ds, v.grad.dot(tn.tau) * ds,
                                     sbase, a_nn, a_nt, a_tn, a_tt);
                    }
                }
                continue;
            }

            // Singular / near-singular panel: product integration. The
            // weight rows depend only on the geometry, not on k.
            const bool cplx = (mode == Mode::ComplexNear);
            Row WL = cplx ? log_weights_near(s0) : log_weights(s0.real());
            Row WCr{};
            CRow WCp{}, WCm{};
            if (cplx) {
                WCp = cauchy_weights_near(s0);
                WCm = cauchy_weights_near(std::conj(s0));
            } else {
                WCr = cauchy_weights(s0.real());
            }

            for (int j = 0; j < kPanelOrder; ++j) {
                const Node& sn = nodes[pan.first_node + j];
                const int gj = pan.first_node + j;
                const double shl = sn.speed * half;
                const double ds = mesh.dsigma(gj);
                const Complex sj(gx[j], 0);
                Vec2 d = sn.pos - x;
                double r = d.norm();

                if (j == diag_j) {
                    Vec2 psi_hat = tn.tau * (tn.speed * half);
                    double lnr = std::log(tn.speed * half);
                    double cb = -1.0 / (kPi * psi_hat.norm2());
                    for (int c = 0; c < nc; ++c) {
                        Complex A0 = -1.0 / kPi;
                        Complex sbase = iks[c] * (A0 * WL[j] * shl +
                                                  (A0 * lnr + kerns[c].phi_smooth0()) * ds);
                        Complex cau = cb * WCr[j] * shl;
                        Complex knu = psi_hat.dot(tn.nu) * cau;   // = 0
                        Complex ktau = psi_hat.dot(tn.tau) * cau;
                        bws[c].col0 = plocal * kPanelOrder + j;
                        bws[c].write(knu, ktau, knu, ktau, sbase, 1.0, 0.0, 0.0, 1.0);
                    }
                    continue;
                }

                double lnratio = std::log(r / std::abs(sj - s0));
                double a_nn = tn.nu.dot(sn.nu), a_nt = tn.nu.dot(sn.tau);
                double a_tn = tn.tau.dot(sn.nu), a_tt = tn.tau.dot(sn.tau);
                Vec2 psi_hat{};
                Complex dz, wp, wm;
                double cbase = 0;
                if (!cplx) {
                    psi_hat = d / (gx[j] - s0.real());
                    cbase = -1.0 / (kPi * psi_hat.norm2());
                } else {
                    dz = to_c(d);
                    wp = (sj - s0) / dz;
                    wm = (sj - std::conj(s0)) / std::conj(dz);
                }

                for (int c = 0; c < nc; ++c) {
                    Kernel::SplitVals sv = kerns[c].split_eval(r);
                    Complex sbase =
                        iks[c] * (sv.A * WL[j] * shl + (sv.A * lnratio + sv.B) * ds);
                    Complex reg = sv.clog * (WL[j] * shl + lnratio * ds) + sv.w * ds;
                    Complex knu_s, ktau_s, knu_t, ktau_t;
                    if (!cplx) {
                        Complex cau = cbase * WCr[j] * shl;
                        knu_s = psi_hat.dot(sn.nu) * cau + d.dot(sn.nu) * reg;
                        ktau_s = psi_hat.dot(sn.tau) * cau + d.dot(sn.tau) * reg;
                        knu_t = psi_hat.dot(tn.nu) * cau + d.dot(tn.nu) * reg;
                        ktau_t = psi_hat.dot(tn.tau) * cau + d.dot(tn.tau) * reg;
                    } else {
                        Complex cp = -(0.5 / kPi) * WCp[j] * shl * wp;
                        Complex cm = -(0.5 / kPi) * WCm[j] * shl * wm;
                        auto kv = [&](Vec2 v) {
                            Complex vc = to_c(v);
                            return vc * cp + std::conj(vc) * cm + d.dot(v) * reg;
                        };
                        knu_s = kv(sn.nu);
                        ktau_s = kv(sn.tau);
                        knu_t = kv(tn.nu);
                        ktau_t = kv(tn.tau);
                    }
                    bws[c].col0 = plocal * kPanelOrder + j;
                    bws[c].write(knu_s, ktau_s, knu_t, ktau_t, sbase, a_nn, a_nt, a_tn,
                                 a_tt);
                }
            }
        }
    });
}

void assemble_ek_scaled(Complex k, const Mesh& mesh, int tbegin, int tend, int pbegin,
                        int pend, const std::array<Complex, 4>& row_scale,
                        const std::array<Complex, 4>& col_scale, Complex prefactor,
                        Matrix& into) {
    std::vector<EkContribution> one = {{k, row_scale, col_scale, prefactor}};
    assemble_ek_multi(one, mesh, tbegin, tend, pbegin, pend, into);
}

Matrix assemble_Ek(Complex k, const Mesh& mesh) {
    const int n = mesh.n_nodes();
    Matrix a = Matrix::Zero(4 * n, 4 * n);
    static const std::array<Complex, 4> ones = {1.0, 1.0, 1.0, 1.0};
    assemble_ek_scaled(k, mesh, 0, n, 0, int(mesh.panels().size()), ones, ones, 1.0, a);
    return a;
}

DiracSystem assemble_dirac_system(Complex k_minus, Complex k_hat, Complex eps_hat,
                                  std::shared_ptr<const Mesh> mesh) {
    DiracSystem sys;
    sys.mesh = mesh;
    sys.k_minus = k_minus;
    sys.k_hat = k_hat;
    sys.eps_hat = eps_hat;
    sys.k_plus = k_minus * k_hat;
    sys.params = dirac_params_2d(k_hat, eps_hat);
    const int n = mesh->n_nodes();
    const int np = int(mesh->panels().size());
    sys.A = Matrix::Zero(4 * n, 4 * n);
    std::vector<EkContribution> both = {
        {sys.k_plus, sys.params.P, sys.params.Np, 1.0},
        {k_minus, sys.params.N, sys.params.Pp, -1.0}};
    assemble_ek_multi(both, *mesh, 0, n, 0, np, sys.A);
    sys.A += Matrix::Identity(4 * n, 4 * n);
    return sys;
}

Matrix assemble_dirac_sector(Complex k_minus, Complex k_hat, Complex eps_hat,
                             const Mesh& mesh, int sector) {
    const int S = mesh.symmetry_sectors();
    if (S < 2 || int(mesh.panels().size()) % S != 0)
        throw std::invalid_argument("assemble_dirac_sector: mesh has no usable symmetry");
    const int ppsec = int(mesh.panels().size()) / S;
    const int K = mesh.n_nodes() / S;
    DiracParams2D par = dirac_params_2d(k_hat, eps_hat);
    Complex k_plus = k_minus * k_hat;
    Matrix a = Matrix::Zero(4 * K, 4 * K);
    std::vector<EkContribution> both = {{k_plus, par.P, par.Np, 1.0},
                                        {k_minus, par.N, par.Pp, -1.0}};
    assemble_ek_multi(both, mesh, 0, K, sector * ppsec, (sector + 1) * ppsec, a);
    if (sector == 0) a += Matrix::Identity(4 * K, 4 * K);
    return a;
}

Vector rhs_plane_wave(Complex k_minus, Vec2 direction, const Mesh& mesh,
                      const DiracParams2D& params) {
    if (std::abs(direction.norm() - 1.0) > 1e-12)
        throw std::invalid_argument("rhs_plane_wave: direction must be a unit vector");
    const int n = mesh.n_nodes();
    Vector rhs(4 * n);
    const Complex ik = Complex(0, 1) * k_minus;
    for (int j = 0; j < n; ++j) {
        const Node& nd = mesh.nodes()[j];
        Complex u0 = std::exp(ik * direction.dot(nd.pos));
        rhs[0 * n + j] = 2.0 * params.N[0] * ik * u0;
        rhs[1 * n + j] = 0.0;
        rhs[2 * n + j] = 2.0 * params.N[2] * ik * direction.dot(nd.nu) * u0;
        rhs[3 * n + j] = 2.0 * params.N[3] * ik * direction.dot(nd.tau) * u0;
    }
    return rhs;
}

Vector plane_wave_trace(Complex k, Vec2 direction, const Mesh& mesh) {
    const int n = mesh.n_nodes();
    Vector f(4 * n);
    const Complex ik = Complex(0, 1) * k;
    for (int j = 0; j < n; ++j) {
        const Node& nd = mesh.nodes()[j];
        Complex u0 = std::exp(ik * direction.dot(nd.pos));
        f[0 * n + j] = ik * u0;
        f[1 * n + j] = 0.0;
        f[2 * n + j] = ik * direction.dot(nd.nu) * u0;
        f[3 * n + j] = ik * direction.dot(nd.tau) * u0;
    }
    return f;
}

Vector point_source_trace(Complex k, Vec2 source, const Mesh& mesh) {
    const int n = mesh.n_nodes();
    Vector f(4 * n);
    Kernel kern(k);
    for (int j = 0; j < n; ++j) {
        const Node& nd = mesh.nodes()[j];
        Kernel::Vals v = kern.eval(nd.pos - source);  // Phi_k(x - x0), grad at x
        f[0 * n + j] = Complex(0, 1) * k * v.phi;
        f[1 * n + j] = 0.0;
        f[2 * n + j] = v.grad.dot(nd.nu);
        f[3 * n + j] = v.grad.dot(nd.tau);
    }
    return f;
}

double cauchy_projection_residual(const Matrix& Ek, const Mesh& mesh, int max_mode) {
    const int n = mesh.n_nodes();
    if (Ek.rows() != 4 * n) throw std::invalid_argument("cauchy_projection_residual: shape");
    double worst = 0;
    Vector f(4 * n);
    for (int m = 0; m <= max_mode; ++m) {
        for (int c = 0; c < 4; ++c) {
            // one trigonometric mode per component, phased per component
            for (int j = 0; j < n; ++j) {
                double t = mesh.nodes()[j].t;
                for (int cc = 0; cc < 4; ++cc) {
                    double amp = (cc == c) ? 1.0 : 0.25;
                    f[cc * n + j] = amp * std::exp(Complex(0, 2 * kPi * m * t + 0.3 * cc));
                }
            }
            Vector r = Ek * (Ek * f) - f;
            worst = std::max(worst, r.norm() / f.norm());
        }
    }
    return worst;
}

bool wp_region_contains(Complex z, Complex k_minus, Complex k_plus) {
    if (z == Complex(0, 0) || k_minus == Complex(0, 0) || k_plus == Complex(0, 0))
        throw std::domain_error("wp_region_contains: zero argument");
    if (k_minus.imag() < 0 || k_plus.imag() < 0)
        throw std::domain_error("wp_region_contains: wavenumbers must have Im >= 0");
    const double half_pi = kPi / 2;
    auto phi = [&](Complex k) { return std::abs(std::atan2(-k.real(), k.imag())); };
    const double phip = phi(k_plus), phim = phi(k_minus);
    const double argz = std::arg(z);
    if (phip < half_pi && phip + phim > 0) return std::abs(argz) <= kPi - phip - phim;
    if (phip == 0 && phim == 0) return std::abs(argz) < kPi;
    if (phip == half_pi && phim > 0 && phim <= half_pi) {
        double a1 = std::abs(argz);
        double a2 = std::abs(std::arg(-z));
        return std::min(a1, a2) <= half_pi - phim;
    }
    // phip == pi/2, phim == 0
    return z.real() != 0.0;
}

std::pair<Complex, Complex> figure_eight(double xi, double delta) {
    if (!(std::abs(delta) < 1.0))
        throw std::domain_error("figure_eight: |delta| < 1 required");
    // sin(d pi (1+i xi)/2) / sin(pi (1+i xi)/2), scaled by exp(-|a|) for
    // overflow-free evaluation; denominator = cosh(a), a = pi xi / 2.
    const double a = 0.5 * kPi * xi;
    const double aa = std::abs(a);
    const double sd = std::sin(0.5 * kPi * delta), cd = std::cos(0.5 * kPi * delta);
    auto sc_cosh = [&](double b) { return 0.5 * (std::exp(b - aa) + std::exp(-b - aa)); };
    auto sc_sinh = [&](double b) { return 0.5 * (std::exp(b - aa) - std::exp(-b - aa)); };
    Complex num(sd * sc_cosh(delta * a), cd * sc_sinh(delta * a));
    double den = sc_cosh(a);
    Complex v = num / den;
    return {v, -v};
}

}  // namespace dirac2d
