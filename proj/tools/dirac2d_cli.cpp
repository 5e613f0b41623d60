// Command-line front end for the dirac2d shared library. Links only the
// public C API. Exit codes: 0 success, 1 check/convergence failure, 2 usage.

#include <CLI11.hpp>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "dirac2d.h"

namespace {

struct ShapeOpts {
    std::string shape = "starfish";
    double radius = 1.0;
    int arms = 5;
    double amplitude = 0.3;
    double angle = 1.5707963267948966;  // teardrop opening angle
};

void add_shape_options(CLI::App* cmd, ShapeOpts& s) {
    cmd->add_option("--shape", s.shape, "circle | starfish | teardrop")
        ->check(CLI::IsMember({"circle", "starfish", "teardrop"}));
    cmd->add_option("--radius", s.radius, "circle radius");
    cmd->add_option("--arms", s.arms, "starfish arm count");
    cmd->add_option("--amplitude", s.amplitude, "starfish amplitude");
    cmd->add_option("--angle", s.angle, "teardrop interior opening angle (radians)");
}

d2d_curve* make_curve(const ShapeOpts& s) {
    d2d_curve* c = nullptr;
    d2d_status st = D2D_OK;
    if (s.shape == "circle")
        st = d2d_curve_circle(s.radius, &c);
    else if (s.shape == "starfish")
        st = d2d_curve_starfish(s.arms, s.amplitude, &c);
    else
        st = d2d_curve_teardrop(s.angle, &c);
    if (st != D2D_OK) throw std::runtime_error(d2d_last_error());
    return c;
}

struct MaterialOpts {
    std::string mcase = "custom";
    std::vector<double> khat = {1.5, 0.0};
    std::vector<double> epshat = {2.25, 0.0};
};

void add_material_options(CLI::App* cmd, MaterialOpts& m) {
    cmd->add_option("--case", m.mcase,
                    "positive | plasmonic | reverse-plasmonic | custom")
        ->check(CLI::IsMember({"positive", "plasmonic", "reverse-plasmonic", "custom"}));
    cmd->add_option("--khat", m.khat, "k_+/k_- (re im), custom case")->expected(2);
    cmd->add_option("--epshat", m.epshat, "eps_+/eps_- (re im), custom case")->expected(2);
}

int case_id(const std::string& name) {
    if (name == "positive") return 0;
    if (name == "plasmonic") return 1;
    if (name == "reverse-plasmonic") return 2;
    return 3;
}

// The canonical parameter triples of the three named cases.
void resolve_material(const MaterialOpts& m, d2d_complex& khat, d2d_complex& epshat) {
    const double s = std::sqrt(1.1838);
    if (m.mcase == "positive") {
        khat = {1.5, 0};
        epshat = {2.25, 0};
    } else if (m.mcase == "plasmonic") {
        khat = {0, s};
        epshat = {-1.1838, 0};
    } else if (m.mcase == "reverse-plasmonic") {
        std::complex<double> kh = 1.0 / std::complex<double>(0, s);
        khat = {kh.real(), kh.imag()};
        epshat = {-1.0 / 1.1838, 0};
    } else {
        khat = {m.khat[0], m.khat[1]};
        epshat = {m.epshat[0], m.epshat[1]};
    }
}

struct Cleanup {
    std::vector<std::function<void()>> fns;
    ~Cleanup() {
        for (auto it = fns.rbegin(); it != fns.rend(); ++it) (*it)();
    }
};

int run_selftest(const std::string& report, bool inject) {
    int failed = 0;
    d2d_status st = d2d_selftest(report.empty() ? nullptr : report.c_str(),
                                 inject ? 1 : 0, &failed);
    if (st != D2D_OK) {
        std::fprintf(stderr, "selftest error: %s\n", d2d_last_error());
        return 1;
    }
    // echo the JSON report to stdout as PASS/FAIL lines
    if (!report.empty()) {
        std::ifstream f(report);
        std::string json((std::istreambuf_iterator<char>(f)),
                         std::istreambuf_iterator<char>());
        std::printf("%s\n", json.c_str());
    }
    std::printf("selftest: %d check(s) failed\n", failed);
    return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dirac2d: Dirac integral equation solver for 2D Helmholtz/TM "
                 "transmission scattering"};
    app.require_subcommand(1);

    // ---- selftest ----
    auto* cmd_self = app.add_subcommand("selftest", "run the built-in invariant suite");
    cmd_self->set_config("--config", "", "flat key=value configuration file");
    std::string report = "selftest_report.json";
    bool inject = false;
    cmd_self->add_option("--report", report, "JSON report path");
    cmd_self->add_flag("--inject-ek-row2-sign-error", inject,
                       "fault-injection hook: flip a sign in row 2 of E_k")
        ->group("");  // hidden

    // ---- params ----
    auto* cmd_params = app.add_subcommand("params", "print P, P', N, N' (2D and 3D)");
    cmd_params->set_config("--config", "", "flat key=value configuration file");
    MaterialOpts pm;
    add_material_options(cmd_params, pm);

    // ---- sweep ----
    auto* cmd_sweep = app.add_subcommand("sweep", "condition-number wavenumber sweep");
    cmd_sweep->set_config("--config", "", "flat key=value configuration file");
    ShapeOpts sw_shape;
    MaterialOpts sw_mat;
    double kmax = 20.0;
    int samples = 400, sw_panels = 60;
    std::string sweep_out = "sweep.csv";
    add_shape_options(cmd_sweep, sw_shape);
    add_material_options(cmd_sweep, sw_mat);
    cmd_sweep->add_option("--kmax", kmax, "upper end of the swept wavenumber range");
    cmd_sweep->add_option("--samples", samples, "number of sweep samples");
    cmd_sweep->add_option("--panels", sw_panels, "mesh panels");
    cmd_sweep->add_option("--out", sweep_out, "output CSV path");

    // ---- scatter ----
    auto* cmd_scatter = app.add_subcommand("scatter", "solve a plane-wave scene");
    cmd_scatter->set_config("--config", "", "flat key=value configuration file");
    ShapeOpts sc_shape;
    MaterialOpts sc_mat;
    std::vector<double> kminus = {5.0, 0.0};
    std::vector<double> dir = {0.70710678118654752, 0.70710678118654752};
    std::vector<double> bbox = {-1.5, 1.5, -1.5, 1.5};
    int sc_panels = 32, sc_levels = 0, nx = 100, ny = 100;
    bool gradient = false, grid_csv = false;
    std::string solver = "direct";
    double gmres_tol = 0.0;
    std::string out_base = "scatter";
    int hsteps = 6;
    double hdelta0 = 0.1, hratio = 0.1;
    add_shape_options(cmd_scatter, sc_shape);
    add_material_options(cmd_scatter, sc_mat);
    cmd_scatter->add_option("--kminus", kminus, "exterior wavenumber (re im)")->expected(2);
    cmd_scatter->add_option("--dir", dir, "incidence direction (x y)")->expected(2);
    cmd_scatter->add_option("--panels", sc_panels, "mesh panels");
    cmd_scatter->add_option("--levels", sc_levels, "dyadic levels toward corners");
    cmd_scatter->add_option("--solver", solver, "direct | gmres")
        ->check(CLI::IsMember({"direct", "gmres"}));
    cmd_scatter->add_option("--gmres-tol", gmres_tol,
                            "relative residual (<=0: machine epsilon)");
    cmd_scatter->add_option("--nx", nx, "grid points in x");
    cmd_scatter->add_option("--ny", ny, "grid points in y");
    cmd_scatter->add_option("--bbox", bbox, "grid box xmin xmax ymin ymax")->expected(4);
    cmd_scatter->add_flag("--gradient", gradient, "also evaluate grad U");
    cmd_scatter->add_flag("--grid-csv", grid_csv, "write the grid as CSV too");
    cmd_scatter->add_option("--out", out_base, "output base path");
    cmd_scatter->add_option("--homotopy-steps", hsteps, "path steps for negative eps");
    cmd_scatter->add_option("--homotopy-delta0", hdelta0, "initial Im eps");
    cmd_scatter->add_option("--homotopy-ratio", hratio, "geometric path ratio");

    // ---- corner ----
    auto* cmd_corner = app.add_subcommand("corner", "corner density exponent fit");
    cmd_corner->set_config("--config", "", "flat key=value configuration file");
    ShapeOpts co_shape;
    co_shape.shape = "teardrop";
    MaterialOpts co_mat;
    std::vector<double> co_kminus = {18.0, 0.0};
    int co_panels = 30, co_levels = 16;
    std::string co_out = "corner";
    add_shape_options(cmd_corner, co_shape);
    add_material_options(cmd_corner, co_mat);
    cmd_corner->add_option("--kminus", co_kminus, "exterior wavenumber (re im)")
        ->expected(2);
    cmd_corner->add_option("--panels", co_panels, "base mesh panels");
    cmd_corner->add_option("--levels", co_levels, "dyadic levels toward the corner");
    cmd_corner->add_option("--out", co_out, "output base path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*cmd_self) return run_selftest(report, inject);

        if (*cmd_params) {
            d2d_complex kh, eh;
            resolve_material(pm, kh, eh);
            d2d_complex P[8], Pp[8], N[8], Np[8];
            if (d2d_params_2d(kh, eh, P, Pp, N, Np) != D2D_OK)
                throw std::runtime_error(d2d_last_error());
            std::printf("khat = %.17g%+.17gi, epshat = %.17g%+.17gi\n", kh.re, kh.im,
                        eh.re, eh.im);
            auto dump = [](const char* name, d2d_complex* v, int n) {
                std::printf("%-3s:", name);
                for (int i = 0; i < n; ++i) std::printf(" %.17g%+.17gi", v[i].re, v[i].im);
                std::printf("\n");
            };
            std::printf("-- 2D (frame {1, nu tau, nu, tau}) --\n");
            dump("P", P, 4);
            dump("P'", Pp, 4);
            dump("N", N, 4);
            dump("N'", Np, 4);
            if (d2d_params_3d(kh, eh, P, Pp, N, Np) == D2D_OK) {
                std::printf("-- 3D (frame {1, tau theta, theta nu, nu tau, nu tau "
                            "theta, nu, tau, theta}) --\n");
                dump("P", P, 8);
                dump("P'", Pp, 8);
                dump("N", N, 8);
                dump("N'", Np, 8);
            } else {
                std::printf("-- 3D: %s --\n", d2d_last_error());
            }
            return 0;
        }

        if (*cmd_sweep) {
            Cleanup cl;
            d2d_curve* curve = make_curve(sw_shape);
            cl.fns.push_back([curve] { d2d_curve_free(curve); });
            d2d_complex kh, eh;
            resolve_material(sw_mat, kh, eh);
            d2d_sweep* sw = nullptr;
            if (d2d_sweep_run(curve, case_id(sw_mat.mcase), kh, eh, kmax, samples,
                              sw_panels, &sw) != D2D_OK)
                throw std::runtime_error(d2d_last_error());
            cl.fns.push_back([sw] { d2d_sweep_free(sw); });
            if (d2d_sweep_write_csv(sw, sweep_out.c_str()) != D2D_OK)
                throw std::runtime_error(d2d_last_error());
            std::printf("sweep: %d samples, %d resonance flag(s); wrote %s\n",
                        d2d_sweep_count(sw), d2d_sweep_flag_count(sw),
                        sweep_out.c_str());
            return 0;
        }

        if (*cmd_scatter) {
            Cleanup cl;
            d2d_curve* curve = make_curve(sc_shape);
            cl.fns.push_back([curve] { d2d_curve_free(curve); });
            d2d_mesh* mesh = nullptr;
            if (d2d_mesh_create(curve, sc_panels, sc_levels, &mesh) != D2D_OK)
                throw std::runtime_error(d2d_last_error());
            cl.fns.push_back([mesh] { d2d_mesh_free(mesh); });
            d2d_complex kh, eh;
            resolve_material(sc_mat, kh, eh);
            d2d_complex km{kminus[0], kminus[1]};

            d2d_solution* sol = nullptr;
            int iters = 0;
            bool negative_real_eps = (eh.im == 0.0 && eh.re < 0.0);
            if (negative_real_eps) {
                std::vector<double> diffs(std::max(hsteps, 2));
                int ndiffs = 0;
                int rev = sc_mat.mcase == "reverse-plasmonic" ? 1 : 0;
                d2d_status st = d2d_solve_homotopy(mesh, km, eh.re, dir[0], dir[1],
                                                   hsteps, hdelta0, hratio, rev, 0,
                                                   &sol, diffs.data(), &ndiffs);
                if (sol) cl.fns.push_back([sol] { d2d_solution_free(sol); });
                std::printf("homotopy path (%d steps):", hsteps);
                for (int i = 0; i < ndiffs; ++i) std::printf(" %.3e", diffs[i]);
                std::printf("\n");
                if (st != D2D_OK) {
                    std::fprintf(stderr, "homotopy: %s\n", d2d_last_error());
                    return 1;
                }
            } else {
                d2d_system* sys = nullptr;
                if (d2d_system_assemble(km, kh, eh, mesh, &sys) != D2D_OK)
                    throw std::runtime_error(d2d_last_error());
                cl.fns.push_back([sys] { d2d_system_free(sys); });
                d2d_status st = d2d_solve_plane_wave(sys, dir[0], dir[1],
                                                     solver == "gmres" ? 1 : 0,
                                                     gmres_tol, &sol, &iters);
                if (st != D2D_OK) {
                    std::fprintf(stderr, "solve: %s\n", d2d_last_error());
                    return 1;
                }
                cl.fns.push_back([sol] { d2d_solution_free(sol); });
            }

            d2d_grid* grid = nullptr;
            if (d2d_solution_grid(sol, bbox[0], bbox[1], bbox[2], bbox[3], nx, ny,
                                  gradient ? 1 : 0, &grid) != D2D_OK)
                throw std::runtime_error(d2d_last_error());
            cl.fns.push_back([grid] { d2d_grid_free(grid); });
            if (d2d_grid_write(grid, (out_base + "_grid").c_str(), grid_csv ? 1 : 0) !=
                D2D_OK)
                throw std::runtime_error(d2d_last_error());
            if (d2d_solution_write_density_csv(sol, (out_base + "_density.csv").c_str()) !=
                D2D_OK)
                throw std::runtime_error(d2d_last_error());
            {
                int n4 = d2d_solution_size(sol);
                std::vector<d2d_complex> hp(n4), hm(n4);
                if (d2d_solution_traces(sol, hp.data(), hm.data()) != D2D_OK)
                    throw std::runtime_error(d2d_last_error());
                std::ofstream tf(out_base + "_traces.csv");
                tf.precision(17);
                tf << "component_major_index,hplus_re,hplus_im,hminus_re,hminus_im\n";
                for (int i = 0; i < n4; ++i)
                    tf << i << "," << hp[i].re << "," << hp[i].im << "," << hm[i].re
                       << "," << hm[i].im << "\n";
            }

            double vjump = -1, djump = -1;
            d2d_solution_jump_residual(sol, &vjump, &djump);
            double far_err = -1, collar_err = -1;
            bool have_oracle = sc_shape.shape == "circle" &&
                               d2d_grid_error_vs_disk_oracle(grid, sol, &far_err,
                                                             &collar_err) == D2D_OK;
            std::ofstream rep(out_base + "_report.json");
            rep.precision(16);
            rep << "{\"gmres_iterations\":" << iters << ",\"jump_residual_value\":"
                << vjump << ",\"jump_residual_deriv\":" << djump;
            if (have_oracle)
                rep << ",\"oracle_max_err_far\":" << far_err
                    << ",\"oracle_max_err_collar\":" << collar_err;
            rep << "}\n";
            std::printf("scatter: wrote %s_grid.{json,bin}%s, %s_density.csv, "
                        "%s_traces.csv, %s_report.json\n",
                        out_base.c_str(), grid_csv ? "/csv" : "", out_base.c_str(),
                        out_base.c_str(), out_base.c_str());
            if (solver == "gmres") std::printf("gmres iterations: %d\n", iters);
            std::printf("jump residuals: value %.3e, derivative %.3e\n", vjump, djump);
            if (have_oracle)
                std::printf("disk oracle: max err %.3e (far), %.3e (collar)\n", far_err,
                            collar_err);
            return 0;
        }

        if (*cmd_corner) {
            if (co_shape.shape != "teardrop") {
                std::fprintf(stderr, "corner: shape must have a corner (teardrop)\n");
                return 2;
            }
            Cleanup cl;
            d2d_curve* curve = make_curve(co_shape);
            cl.fns.push_back([curve] { d2d_curve_free(curve); });
            d2d_mesh* mesh = nullptr;
            if (d2d_mesh_create(curve, co_panels, co_levels, &mesh) != D2D_OK)
                throw std::runtime_error(d2d_last_error());
            cl.fns.push_back([mesh] { d2d_mesh_free(mesh); });
            d2d_complex kh, eh;
            resolve_material(co_mat, kh, eh);
            d2d_complex km{co_kminus[0], co_kminus[1]};

            d2d_solution* sol = nullptr;
            if (eh.im == 0.0 && eh.re < 0.0) {
                int rev = co_mat.mcase == "reverse-plasmonic" ? 1 : 0;
                d2d_status st = d2d_solve_homotopy(mesh, km, eh.re, 1 / std::sqrt(2.0),
                                                   1 / std::sqrt(2.0), 6, 0.1, 0.1, rev,
                                                   1, &sol, nullptr, nullptr);
                if (sol) cl.fns.push_back([sol] { d2d_solution_free(sol); });
                if (st != D2D_OK) {
                    std::fprintf(stderr, "homotopy: %s\n", d2d_last_error());
                    return 1;
                }
            } else {
                d2d_system* sys = nullptr;
                if (d2d_system_assemble(km, kh, eh, mesh, &sys) != D2D_OK)
                    throw std::runtime_error(d2d_last_error());
                cl.fns.push_back([sys] { d2d_system_free(sys); });
                if (d2d_solve_plane_wave(sys, 1 / std::sqrt(2.0), 1 / std::sqrt(2.0), 0,
                                         0, &sol, nullptr) != D2D_OK)
                    throw std::runtime_error(d2d_last_error());
                cl.fns.push_back([sol] { d2d_solution_free(sol); });
            }

            d2d_complex ea, eb;
            double ra, rb;
            if (d2d_solution_corner_fit(sol, &ea, &ra, &eb, &rb) != D2D_OK)
                throw std::runtime_error(d2d_last_error());
            if (d2d_solution_write_density_csv(sol, (co_out + "_density.csv").c_str()) !=
                D2D_OK)
                throw std::runtime_error(d2d_last_error());
            std::ofstream rep(co_out + "_report.json");
            rep.precision(16);
            rep << "{\"eta_side_a\":[" << ea.re << "," << ea.im << "],\"fit_residual_a\":"
                << ra << ",\"eta_side_b\":[" << eb.re << "," << eb.im
                << "],\"fit_residual_b\":" << rb << "}\n";
            std::printf("corner exponent eta: side a %.6f%+.6fi (residual %.2e), "
                        "side b %.6f%+.6fi (residual %.2e)\n",
                        ea.re, ea.im, ra, eb.re, eb.im, rb);
            std::printf("corner: wrote %s_density.csv, %s_report.json\n", co_out.c_str(),
                        co_out.c_str());
            return 0;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
