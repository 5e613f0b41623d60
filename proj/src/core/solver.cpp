#include "solver.hpp"

#include <algorithm>
#include <cmath>

#include "fields.hpp"

namespace dirac2d {

Vector solve_direct(const Matrix& a, const Vector& b) {
    if (a.rows() != a.cols() || a.rows() != b.size())
        throw std::invalid_argument("solve_direct: shape mismatch");
    LuFactor lu(a);
    if (lu.pivot_ratio() < 1e-14) throw RankDeficiencyError(sigma_min(lu));
    return lu.solve(b);
}

CondResult condition_number(const Matrix& a) {
    CondResult r;
    if (a.rows() <= 1024) {
        auto sv = singular_values(a);
        r.sigma_max = sv.front();
        r.sigma_min = sv.back();
        r.method = "svd";
    } else {
        r.sigma_max = norm2(a);
        LuFactor lu(a);
        r.sigma_min = sigma_min(lu);
        r.method = "power+lu-inverse-iteration";
    }
    r.cond2 = r.sigma_max / r.sigma_min;
    return r;
}

std::pair<Complex, Complex> material_params(MaterialCase c) {
    const double s = std::sqrt(1.1838);
    switch (c) {
        case MaterialCase::positive_dielectric:
            return {Complex(1.5, 0), Complex(2.25, 0)};
        case MaterialCase::plasmonic:
            return {Complex(0, s), Complex(-1.1838, 0)};
        case MaterialCase::reverse_plasmonic:
            return {1.0 / Complex(0, s), Complex(-1.0 / 1.1838, 0)};
        default:
            throw std::invalid_argument("material_params: custom case has no fixed triple");
    }
}

namespace {

struct SigmaRange {
    double smax, smin;
};

// Extreme singular values of the full system via its sector blocks:
// the node permutation grouping sectors makes the matrix block-circulant,
// so its singular values are the union over the DFT blocks.
SigmaRange circulant_sigma_range(Complex k_minus, Complex k_hat, Complex eps_hat,
                                 const Mesh& mesh) {
    const int S = mesh.symmetry_sectors();
    std::vector<Matrix> blocks(S);
    for (int g = 0; g < S; ++g)
        blocks[g] = assemble_dirac_sector(k_minus, k_hat, eps_hat, mesh, g);
    SigmaRange r{0, 1e300};
    const int dim = int(blocks[0].rows());
    for (int m = 0; m < S; ++m) {
        Matrix B = Matrix::Zero(dim, dim);
        for (int g = 0; g < S; ++g) {
            Complex w = std::exp(Complex(0, 2 * kPi * m * g / S));
            B += w * blocks[g];
        }
        // sweep-grade accuracy: the flag rule needs ~3 digits, not 8
        r.smax = std::max(r.smax, norm2(B, 1e-5, 80));
        r.smin = std::min(r.smin, sigma_min_single(B));
    }
    return r;
}

SigmaRange dense_sigma_range(Complex k_minus, Complex k_hat, Complex eps_hat,
                             std::shared_ptr<const Mesh> mesh) {
    auto sys = assemble_dirac_system(k_minus, k_hat, eps_hat, mesh);
    SigmaRange r;
    r.smax = norm2(sys.A);
    LuFactor lu(std::move(sys.A));
    r.smin = sigma_min(lu);
    return r;
}

}  // namespace

std::vector<SweepRecord> sweep(MaterialCase mcase, std::shared_ptr<Curve> curve,
                               const SweepOptions& opt) {
    if (!(opt.k_max > 0) || opt.n_samples < 1)
        throw std::invalid_argument("sweep: k range must be positive");
    Complex k_hat = opt.k_hat, eps_hat = opt.eps_hat;
    if (mcase != MaterialCase::custom) {
        auto [kh, eh] = material_params(mcase);
        k_hat = kh;
        eps_hat = eh;
    }
    auto mesh = make_mesh(curve, opt.n_panels);
    const bool circulant = mesh->symmetry_sectors() >= 2;

    std::vector<SweepRecord> rec(opt.n_samples);
    for (int i = 0; i < opt.n_samples; ++i) {
        double s = opt.k_max * double(i + 1) / opt.n_samples;
        // the reverse plasmonic case sweeps the (real) interior wavenumber
        Complex k_minus = (mcase == MaterialCase::reverse_plasmonic) ? s / k_hat
                                                                     : Complex(s, 0);
        SigmaRange sr = circulant
                            ? circulant_sigma_range(k_minus, k_hat, eps_hat, *mesh)
                            : dense_sigma_range(k_minus, k_hat, eps_hat, mesh);
        rec[i].k_minus = k_minus;
        rec[i].sigma_min = sr.smin;
        rec[i].cond2 = sr.smax / sr.smin;
        rec[i].method = circulant ? "circulant-blocks power+single-lu-inverse-iteration"
                                  : "power+lu-inverse-iteration";
    }

    // resonance flags: local condition spikes over a rolling median
    const int w = opt.median_window;
    std::vector<double> buf;
    for (int i = 0; i < opt.n_samples; ++i) {
        buf.clear();
        for (int j = std::max(0, i - w); j <= std::min(opt.n_samples - 1, i + w); ++j)
            buf.push_back(rec[j].cond2);
        std::nth_element(buf.begin(), buf.begin() + buf.size() / 2, buf.end());
        double med = buf[buf.size() / 2];
        rec[i].flag = rec[i].cond2 > opt.flag_factor * med;
    }
    return rec;
}

HomotopyResult homotopy_solve(std::shared_ptr<const Mesh> mesh, Complex k_minus,
                              double eps_hat_target, Vec2 direction,
                              const std::vector<Vec2>& probes, HomotopyOptions opt) {
    if (!(eps_hat_target < 0))
        throw std::invalid_argument("homotopy_solve: eps_hat target must be negative real");
    HomotopyResult res;
    res.converged = false;
    Vector prev_h, prev_probe;
    double delta = opt.delta0;
    std::vector<Vec2> inside, outside;
    for (auto p : probes)
        (winding_number(*mesh, p) ? inside : outside).push_back(p);

    for (int step = 0; step < opt.steps; ++step, delta *= opt.ratio) {
        Complex eps(eps_hat_target, delta);
        Complex khat, km;
        if (opt.reverse_branch) {
            // fixed real interior wavenumber; Im k_minus >= 0 forces the
            // lower-half branch of sqrt(eps)
            khat = -std::sqrt(eps);
            km = k_minus / khat;
        } else {
            khat = std::sqrt(eps);  // principal: upper half plane
            km = k_minus;
        }
        auto sys = assemble_dirac_system(km, khat, eps, mesh);
        Vector rhs = rhs_plane_wave(km, direction, *mesh, sys.params);
        Vector x;
        int iters = 0;
        if (opt.use_direct) {
            x = solve_direct(sys.A, rhs);
        } else {
            GmresOptions go;
            go.tol = opt.gmres_tol;
            if (prev_h.size()) go.x0 = &prev_h;
            GmresResult g = gmres(sys.A, rhs, go);
            x = std::move(g.x);
            iters = g.iterations;
        }
        GmresResult g;
        g.x = std::move(x);
        g.iterations = iters;
        res.gmres_iters.push_back(g.iterations);
        res.deltas.push_back(delta);
        if (step == 0) res.h_first = g.x;

        // probe fields for the Cauchy-sequence diagnostic
        Traces tr = traces_from_density(g.x, sys.params);
        auto ui = eval_U(tr.h_plus, sys.k_plus, *mesh, inside, Region::interior, false);
        auto ue = eval_U(tr.h_minus, sys.k_minus, *mesh, outside, Region::exterior, false);
        Vector pv(ui.size() + ue.size());
        for (size_t i = 0; i < ui.size(); ++i) pv[i] = ui[i];
        for (size_t i = 0; i < ue.size(); ++i) pv[ui.size() + i] = ue[i];
        if (prev_probe.size())
            res.probe_diffs.push_back((pv - prev_probe).lpNorm<Eigen::Infinity>());
        prev_probe = pv;

        if (step + 1 == opt.steps) {
            // Richardson limit assuming O(delta) convergence along the path
            if (prev_h.size())
                res.h = g.x + (g.x - prev_h) * (opt.ratio / (1.0 - opt.ratio));
            else
                res.h = g.x;
        }
        prev_h = g.x;
    }
    // converged if the probe increments kept shrinking
    res.converged = true;
    for (size_t i = 1; i < res.probe_diffs.size(); ++i)
        if (res.probe_diffs[i] > 0.8 * res.probe_diffs[i - 1]) res.converged = false;
    if (res.probe_diffs.empty()) res.converged = opt.steps == 1;
    return res;
}

}  // namespace dirac2d
