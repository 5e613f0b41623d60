#include "dirac2d.h"

#include <cstring>
#include <fstream>
#include <memory>
#include <string>

#include "core/io.hpp"
#include "core/mueller.hpp"
#include "core/selftest.hpp"
#include "core/solver.hpp"

using namespace dirac2d;

namespace {

thread_local std::string g_last_error;

d2d_status fail(d2d_status code, const std::string& msg) {
    g_last_error = msg;
    return code;
}

template <class Fn>
d2d_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const RankDeficiencyError& e) {
        return fail(D2D_ERR_SINGULAR, e.what());
    } catch (const GmresNonConvergence& e) {
        return fail(D2D_ERR_NO_CONVERGENCE, e.what());
    } catch (const std::domain_error& e) {
        return fail(D2D_ERR_DOMAIN, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(D2D_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::exception& e) {
        return fail(D2D_ERR_INTERNAL, e.what());
    }
}

Complex cc(d2d_complex z) { return {z.re, z.im}; }
d2d_complex dc(Complex z) { return {z.real(), z.imag()}; }

}  // namespace

struct d2d_curve {
    std::shared_ptr<Curve> c;
};
struct d2d_mesh {
    std::shared_ptr<Mesh> m;
    int dyadic_levels = 0;
};
struct d2d_system {
    DiracSystem sys;
    Provenance prov;
};
struct d2d_solution {
    DiracSystem sys;  // keeps mesh + params (matrix cleared after solve)
    Vector h;
    Traces traces;
    Vec2 direction;
    Provenance prov;
};
struct d2d_sweep {
    std::vector<SweepRecord> recs;
    Provenance prov;
};
struct d2d_grid {
    FieldGrid g;
    Provenance prov;
};

extern "C" {

const char* d2d_version(void) { return "dirac2d 1.0.0"; }
const char* d2d_last_error(void) { return g_last_error.c_str(); }

d2d_status d2d_curve_circle(double radius, d2d_curve** out) {
    return guarded([&] {
        *out = new d2d_curve{make_circle(radius)};
        return D2D_OK;
    });
}

d2d_status d2d_curve_starfish(int arms, double amplitude, d2d_curve** out) {
    return guarded([&] {
        *out = new d2d_curve{make_starfish(arms, amplitude)};
        return D2D_OK;
    });
}

d2d_status d2d_curve_teardrop(double opening_angle, d2d_curve** out) {
    return guarded([&] {
        *out = new d2d_curve{make_teardrop(opening_angle)};
        return D2D_OK;
    });
}

void d2d_curve_free(d2d_curve* c) { delete c; }

d2d_status d2d_mesh_create(const d2d_curve* c, int n_panels, int dyadic_levels,
                           d2d_mesh** out) {
    return guarded([&] {
        if (!c) return fail(D2D_ERR_INVALID_ARGUMENT, "mesh: null curve");
        Grading g = dyadic_levels > 0 ? Grading::dyadic(dyadic_levels) : Grading::none();
        *out = new d2d_mesh{make_mesh(c->c, n_panels, g), dyadic_levels};
        return D2D_OK;
    });
}

void d2d_mesh_free(d2d_mesh* m) { delete m; }
int d2d_mesh_nodes(const d2d_mesh* m) { return m ? m->m->n_nodes() : 0; }
int d2d_mesh_panels(const d2d_mesh* m) { return m ? int(m->m->panels().size()) : 0; }

d2d_status d2d_params_2d(d2d_complex k_hat, d2d_complex eps_hat, d2d_complex P[4],
                         d2d_complex Pp[4], d2d_complex N[4], d2d_complex Np[4]) {
    return guarded([&] {
        auto p = dirac_params_2d(cc(k_hat), cc(eps_hat));
        for (int i = 0; i < 4; ++i) {
            P[i] = dc(p.P[i]);
            Pp[i] = dc(p.Pp[i]);
            N[i] = dc(p.N[i]);
            Np[i] = dc(p.Np[i]);
        }
        return D2D_OK;
    });
}

d2d_status d2d_params_3d(d2d_complex k_hat, d2d_complex eps_hat, d2d_complex P[8],
                         d2d_complex Pp[8], d2d_complex N[8], d2d_complex Np[8]) {
    return guarded([&] {
        auto p = dirac_params_3d(cc(k_hat), cc(eps_hat));
        for (int i = 0; i < 8; ++i) {
            P[i] = dc(p.P[i]);
            Pp[i] = dc(p.Pp[i]);
            N[i] = dc(p.N[i]);
            Np[i] = dc(p.Np[i]);
        }
        return D2D_OK;
    });
}

d2d_status d2d_wp_contains(d2d_complex z, d2d_complex k_minus, d2d_complex k_plus,
                           int* contains) {
    return guarded([&] {
        *contains = wp_region_contains(cc(z), cc(k_minus), cc(k_plus)) ? 1 : 0;
        return D2D_OK;
    });
}

d2d_status d2d_figure_eight(double xi, double delta, d2d_complex* plus,
                            d2d_complex* minus) {
    return guarded([&] {
        auto [a, b] = figure_eight(xi, delta);
        *plus = dc(a);
        *minus = dc(b);
        return D2D_OK;
    });
}

namespace {

Provenance make_prov(const Mesh& mesh, Complex km, Complex kh, Complex eh,
                     const std::string& cfg) {
    Provenance p;
    p.config_text = cfg;
    p.k_minus = km;
    p.k_hat = kh;
    p.eps_hat = eh;
    p.shape = mesh.curve().name();
    p.n_panels = int(mesh.panels().size());
    p.n_nodes = mesh.n_nodes();
    p.grading = mesh.grading().kind == Grading::Kind::dyadic
                    ? "dyadic(" + std::to_string(mesh.grading().levels) + ")"
                    : "none";
    return p;
}

}  // namespace

d2d_status d2d_system_assemble(d2d_complex k_minus, d2d_complex k_hat,
                               d2d_complex eps_hat, const d2d_mesh* m,
                               d2d_system** out) {
    return guarded([&] {
        if (!m) return fail(D2D_ERR_INVALID_ARGUMENT, "assemble: null mesh");
        auto sys = assemble_dirac_system(cc(k_minus), cc(k_hat), cc(eps_hat), m->m);
        Provenance prov = make_prov(*m->m, cc(k_minus), cc(k_hat), cc(eps_hat),
                                    "system_assemble");
        *out = new d2d_system{std::move(sys), std::move(prov)};
        return D2D_OK;
    });
}

void d2d_system_free(d2d_system* s) { delete s; }

d2d_status d2d_system_export_matrix(const d2d_system* s, const char* path) {
    return guarded([&] {
        write_matrix_bin(path, s->sys.A);
        return D2D_OK;
    });
}

d2d_status d2d_system_cond(const d2d_system* s, double* cond2, double* sigma_min) {
    return guarded([&] {
        auto c = condition_number(s->sys.A);
        *cond2 = c.cond2;
        *sigma_min = c.sigma_min;
        return D2D_OK;
    });
}

d2d_status d2d_solve_plane_wave(const d2d_system* s, double dir_x, double dir_y,
                                int use_gmres, double gmres_tol, d2d_solution** out,
                                int* gmres_iters) {
    return guarded([&] {
        Vec2 dir{dir_x, dir_y};
        double nn = dir.norm();
        if (nn == 0) return fail(D2D_ERR_INVALID_ARGUMENT, "zero direction");
        dir = dir / nn;
        Vector rhs = rhs_plane_wave(s->sys.k_minus, dir, *s->sys.mesh, s->sys.params);
        Vector h;
        int iters = 0;
        if (use_gmres) {
            GmresOptions go;
            if (gmres_tol > 0) go.tol = gmres_tol;
            auto r = gmres(s->sys.A, rhs, go);
            h = r.x;
            iters = r.iterations;
        } else {
            h = solve_direct(s->sys.A, rhs);
        }
        auto sol = new d2d_solution;
        sol->sys = s->sys;
        sol->sys.A.resize(0, 0);  // the solution keeps mesh/params only
        sol->h = std::move(h);
        sol->traces = traces_from_density(sol->h, s->sys.params);
        sol->direction = dir;
        sol->prov = s->prov;
        *out = sol;
        if (gmres_iters) *gmres_iters = iters;
        return D2D_OK;
    });
}

void d2d_solution_free(d2d_solution* s) { delete s; }

int d2d_solution_size(const d2d_solution* s) { return s ? int(s->h.size()) : 0; }

d2d_status d2d_solution_density(const d2d_solution* s, d2d_complex* h) {
    return guarded([&] {
        for (int i = 0; i < int(s->h.size()); ++i) h[i] = dc(s->h[i]);
        return D2D_OK;
    });
}

d2d_status d2d_solution_traces(const d2d_solution* s, d2d_complex* h_plus,
                               d2d_complex* h_minus) {
    return guarded([&] {
        for (int i = 0; i < int(s->h.size()); ++i) {
            h_plus[i] = dc(s->traces.h_plus[i]);
            h_minus[i] = dc(s->traces.h_minus[i]);
        }
        return D2D_OK;
    });
}

d2d_status d2d_solution_eval_u(const d2d_solution* s, const double* xy, int npts,
                               int interior, d2d_complex* u) {
    return guarded([&] {
        std::vector<Vec2> pts(npts);
        for (int i = 0; i < npts; ++i) pts[i] = {xy[2 * i], xy[2 * i + 1]};
        auto vals = interior
                        ? eval_U(s->traces.h_plus, s->sys.k_plus, *s->sys.mesh, pts,
                                 Region::interior)
                        : eval_U(s->traces.h_minus, s->sys.k_minus, *s->sys.mesh, pts,
                                 Region::exterior);
        for (int i = 0; i < npts; ++i) u[i] = dc(vals[i]);
        return D2D_OK;
    });
}

d2d_status d2d_solution_eval_grad_u(const d2d_solution* s, const double* xy, int npts,
                                    int interior, d2d_complex* du) {
    return guarded([&] {
        std::vector<Vec2> pts(npts);
        for (int i = 0; i < npts; ++i) pts[i] = {xy[2 * i], xy[2 * i + 1]};
        auto vals = interior
                        ? eval_gradU(s->traces.h_plus, s->sys.k_plus, *s->sys.mesh, pts,
                                     Region::interior)
                        : eval_gradU(s->traces.h_minus, s->sys.k_minus, *s->sys.mesh,
                                     pts, Region::exterior);
        for (int i = 0; i < npts; ++i) {
            du[2 * i] = dc(vals[i].x);
            du[2 * i + 1] = dc(vals[i].y);
        }
        return D2D_OK;
    });
}

d2d_status d2d_solution_jump_residual(const d2d_solution* s, double* value_jump,
                                      double* deriv_jump) {
    return guarded([&] {
        auto r = transmission_residual(s->sys, s->h, s->direction);
        *value_jump = r.value_jump;
        *deriv_jump = r.deriv_jump;
        return D2D_OK;
    });
}

d2d_status d2d_solution_write_density_csv(const d2d_solution* s, const char* path) {
    return guarded([&] {
        write_density_csv(path, s->h, *s->sys.mesh, s->prov);
        return D2D_OK;
    });
}

d2d_status d2d_solution_corner_fit(const d2d_solution* s, d2d_complex* eta_a,
                                   double* residual_a, d2d_complex* eta_b,
                                   double* residual_b) {
    return guarded([&] {
        auto fit = corner_exponent_fit(s->h, *s->sys.mesh);
        *eta_a = dc(fit.side_a.eta);
        *residual_a = fit.side_a.residual;
        *eta_b = dc(fit.side_b.eta);
        *residual_b = fit.side_b.residual;
        return D2D_OK;
    });
}

d2d_status d2d_solution_grid(const d2d_solution* s, double xmin, double xmax,
                             double ymin, double ymax, int nx, int ny, int gradient,
                             d2d_grid** out) {
    return guarded([&] {
        GridSpec spec{xmin, xmax, ymin, ymax, nx, ny, gradient != 0};
        *out = new d2d_grid{grid_eval(s->sys, s->h, spec), s->prov};
        return D2D_OK;
    });
}

void d2d_grid_free(d2d_grid* g) { delete g; }

d2d_status d2d_grid_write(const d2d_grid* g, const char* base_path, int also_csv) {
    return guarded([&] {
        write_field_grid(base_path, g->g, g->prov, also_csv != 0);
        return D2D_OK;
    });
}

d2d_status d2d_grid_error_vs_disk_oracle(const d2d_grid* g, const d2d_solution* s,
                                         double* max_err_far, double* max_err_collar) {
    return guarded([&] {
        if (s->sys.mesh->curve().name() != "circle")
            return fail(D2D_ERR_INVALID_ARGUMENT, "oracle map needs a circle scene");
        double radius = s->sys.mesh->curve().params()[0].second;
        int order = std::max(20, int(2 * std::abs(s->sys.k_minus) * radius) + 8);
        DiskOracle oracle(radius, s->sys.k_minus, s->sys.k_hat, s->sys.eps_hat,
                          s->direction, order);
        double far = 0, collar = 0;
        const FieldGrid& fg = g->g;
        for (int j = 0; j < fg.ny; ++j)
            for (int i = 0; i < fg.nx; ++i) {
                int idx = j * fg.nx + i;
                if (fg.tag[idx] == 2) continue;
                Vec2 p{fg.xmin + (fg.xmax - fg.xmin) * (i + 0.5) / fg.nx,
                       fg.ymin + (fg.ymax - fg.ymin) * (j + 0.5) / fg.ny};
                Complex want = fg.tag[idx] ? oracle.u_plus(p) : oracle.u_minus(p);
                double err = std::abs(fg.U[idx] - want);
                (fg.collar[idx] ? collar : far) =
                    std::max(fg.collar[idx] ? collar : far, err);
            }
        *max_err_far = far;
        *max_err_collar = collar;
        return D2D_OK;
    });
}

d2d_status d2d_solve_homotopy(const d2d_mesh* m, d2d_complex k_minus,
                              double eps_hat_target, double dir_x, double dir_y,
                              int steps, double delta0, double ratio,
                              int reverse_branch, int use_direct,
                              d2d_solution** out, double* probe_diffs, int* n_diffs) {
    return guarded([&] {
        Vec2 dir{dir_x, dir_y};
        dir = dir / dir.norm();
        // fixed probe ring pattern scaled to the mesh bounding box
        std::vector<Vec2> probes;
        double rmax = 0;
        for (const auto& nd : m->m->nodes()) rmax = std::max(rmax, nd.pos.norm());
        for (int i = 0; i < 5; ++i) {
            double a = 2 * kPi * i / 5 + 0.13;
            probes.push_back({0.25 * rmax * std::cos(a), 0.25 * rmax * std::sin(a)});
            probes.push_back({1.8 * rmax * std::cos(a), 1.8 * rmax * std::sin(a)});
        }
        HomotopyOptions opt;
        opt.steps = steps;
        opt.delta0 = delta0;
        opt.ratio = ratio;
        opt.reverse_branch = reverse_branch != 0;
        opt.use_direct = use_direct != 0;
        auto res = homotopy_solve(m->m, cc(k_minus), eps_hat_target, dir, probes, opt);
        Complex eps(eps_hat_target, 0);
        Complex khat = Complex(0, std::sqrt(-eps_hat_target));
        Complex klim = cc(k_minus);
        if (opt.reverse_branch) {
            khat = -khat;
            klim = cc(k_minus) / khat;
        }
        auto sol = new d2d_solution;
        sol->sys.mesh = m->m;
        sol->sys.k_minus = klim;
        sol->sys.k_hat = khat;
        sol->sys.k_plus = klim * khat;
        sol->sys.eps_hat = eps;
        sol->sys.params = dirac_params_2d(khat, eps);
        sol->h = res.h;
        sol->traces = traces_from_density(res.h, sol->sys.params);
        sol->direction = dir;
        sol->prov = make_prov(*m->m, klim, khat, eps, "homotopy");
        *out = sol;
        if (probe_diffs && n_diffs) {
            *n_diffs = int(res.probe_diffs.size());
            for (size_t i = 0; i < res.probe_diffs.size(); ++i)
                probe_diffs[i] = res.probe_diffs[i];
        }
        if (!res.converged)
            return fail(D2D_ERR_NO_CONVERGENCE,
                        "homotopy path did not form a Cauchy sequence");
        return D2D_OK;
    });
}

d2d_status d2d_sweep_run(const d2d_curve* c, int material_case, d2d_complex k_hat,
                         d2d_complex eps_hat, double k_max, int n_samples,
                         int n_panels, d2d_sweep** out) {
    return guarded([&] {
        SweepOptions opt;
        opt.k_max = k_max;
        opt.n_samples = n_samples;
        opt.n_panels = n_panels;
        opt.k_hat = cc(k_hat);
        opt.eps_hat = cc(eps_hat);
        MaterialCase mc = material_case == 0   ? MaterialCase::positive_dielectric
                          : material_case == 1 ? MaterialCase::plasmonic
                          : material_case == 2 ? MaterialCase::reverse_plasmonic
                                               : MaterialCase::custom;
        auto recs = sweep(mc, c->c, opt);
        auto sw = new d2d_sweep;
        sw->recs = std::move(recs);
        Complex kh = opt.k_hat, eh = opt.eps_hat;
        if (mc != MaterialCase::custom) {
            auto [a, b] = material_params(mc);
            kh = a;
            eh = b;
        }
        sw->prov.config_text = "sweep case=" + std::to_string(material_case) +
                               " kmax=" + std::to_string(k_max) +
                               " samples=" + std::to_string(n_samples);
        sw->prov.k_hat = kh;
        sw->prov.eps_hat = eh;
        sw->prov.shape = c->c->name();
        sw->prov.n_panels = n_panels;
        sw->prov.n_nodes = n_panels * 16;
        sw->prov.grading = "none";
        *out = sw;
        return D2D_OK;
    });
}

void d2d_sweep_free(d2d_sweep* s) { delete s; }
int d2d_sweep_count(const d2d_sweep* s) { return s ? int(s->recs.size()) : 0; }

int d2d_sweep_flag_count(const d2d_sweep* s) {
    int n = 0;
    for (const auto& r : s->recs) n += r.flag ? 1 : 0;
    return n;
}

d2d_status d2d_sweep_record(const d2d_sweep* s, int i, d2d_complex* k_minus,
                            double* cond2, double* sigma_min, int* flag) {
    return guarded([&] {
        if (i < 0 || i >= int(s->recs.size()))
            return fail(D2D_ERR_INVALID_ARGUMENT, "sweep record index");
        const auto& r = s->recs[i];
        *k_minus = dc(r.k_minus);
        *cond2 = r.cond2;
        *sigma_min = r.sigma_min;
        *flag = r.flag ? 1 : 0;
        return D2D_OK;
    });
}

d2d_status d2d_sweep_write_csv(const d2d_sweep* s, const char* path) {
    return guarded([&] {
        write_sweep_csv(path, s->recs, s->prov);
        return D2D_OK;
    });
}

d2d_status d2d_selftest(const char* report_path, int inject_fault, int* n_failed) {
    return guarded([&] {
        set_ek_row2_sign_injection(inject_fault != 0);
        auto checks = run_selftest();
        set_ek_row2_sign_injection(false);
        int bad = 0;
        for (const auto& c : checks) bad += c.pass ? 0 : 1;
        if (n_failed) *n_failed = bad;
        if (report_path) {
            std::ofstream f(report_path);
            if (!f) return fail(D2D_ERR_IO, "cannot open report path");
            f << selftest_report_json(checks) << "\n";
        }
        return D2D_OK;
    });
}

d2d_status d2d_disk_oracle_eval(double radius, d2d_complex k_minus, d2d_complex k_hat,
                                d2d_complex eps_hat, double dir_x, double dir_y,
                                int order, const double* xy, int npts, int interior,
                                d2d_complex* u) {
    return guarded([&] {
        DiskOracle oracle(radius, cc(k_minus), cc(k_hat), cc(eps_hat),
                          Vec2{dir_x, dir_y}, order);
        for (int i = 0; i < npts; ++i) {
            Vec2 p{xy[2 * i], xy[2 * i + 1]};
            u[i] = dc(interior ? oracle.u_plus(p) : oracle.u_minus(p));
        }
        return D2D_OK;
    });
}

}  // extern "C"
