#include "geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "quadrature.hpp"

namespace dirac2d {

namespace {

class CircleCurve : public Curve {
public:
    explicit CircleCurve(double r) : r_(r) {}
    Vec2 position(double t) const override {
        double a = 2 * kPi * t;
        return {r_ * std::cos(a), r_ * std::sin(a)};
    }
    Vec2 derivative(double t) const override {
        double a = 2 * kPi * t;
        return {-2 * kPi * r_ * std::sin(a), 2 * kPi * r_ * std::cos(a)};
    }
    std::string name() const override { return "circle"; }
    int cyclic_symmetry() const override { return 0; }  // continuous
    std::vector<std::pair<std::string, double>> params() const override {
        return {{"radius", r_}};
    }

private:
    double r_;
};

class StarfishCurve : public Curve {
public:
    StarfishCurve(int arms, double amp) : arms_(arms), amp_(amp) {}
    Vec2 position(double t) const override {
        double a = 2 * kPi * t;
        double r = 1.0 + amp_ * std::cos(arms_ * a);
        return {r * std::cos(a), r * std::sin(a)};
    }
    Vec2 derivative(double t) const override {
        double a = 2 * kPi * t;
        double r = 1.0 + amp_ * std::cos(arms_ * a);
        double dr = -amp_ * arms_ * std::sin(arms_ * a);
        double px = dr * std::cos(a) - r * std::sin(a);
        double py = dr * std::sin(a) + r * std::cos(a);
        return {2 * kPi * px, 2 * kPi * py};
    }
    std::string name() const override { return "starfish"; }
    int cyclic_symmetry() const override { return arms_; }
    std::vector<std::pair<std::string, double>> params() const override {
        return {{"arms", double(arms_)}, {"amplitude", amp_}};
    }

private:
    int arms_;
    double amp_;
};

// One-corner drop: z(t) = sin(pi t) * exp(i theta (t - 1/2)). The corner
// sits at the origin (t = 0 = 1) with interior opening angle theta; for
// theta = pi the curve degenerates to a smooth circle of radius 1/2.
class TeardropCurve : public Curve {
public:
    explicit TeardropCurve(double theta) : th_(theta) {}
    Vec2 position(double t) const override {
        double s = std::sin(kPi * t), p = th_ * (t - 0.5);
        return {s * std::cos(p), s * std::sin(p)};
    }
    Vec2 derivative(double t) const override {
        double s = std::sin(kPi * t), c = kPi * std::cos(kPi * t);
        double p = th_ * (t - 0.5);
        double cp = std::cos(p), sp = std::sin(p);
        return {c * cp - s * th_ * sp, c * sp + s * th_ * cp};
    }
    std::string name() const override { return "teardrop"; }
    std::vector<double> corners() const override {
        if (std::abs(th_ - kPi) < 1e-14) return {};  // straight angle: smooth
        return {0.0};
    }
    std::vector<std::pair<std::string, double>> params() const override {
        return {{"opening_angle", th_}};
    }

private:
    double th_;
};

}  // namespace

std::shared_ptr<Curve> make_circle(double radius) {
    if (!(radius > 0)) throw std::invalid_argument("make_circle: radius must be > 0");
    return std::make_shared<CircleCurve>(radius);
}

std::shared_ptr<Curve> make_starfish(int arms, double amplitude) {
    if (arms < 1) throw std::invalid_argument("make_starfish: arms must be >= 1");
    if (!(amplitude >= 0 && amplitude < 1))
        throw std::invalid_argument("make_starfish: amplitude must be in [0,1)");
    return std::make_shared<StarfishCurve>(arms, amplitude);
}

std::shared_ptr<Curve> make_teardrop(double opening_angle) {
    if (!(opening_angle > 0 && opening_angle < 2 * kPi))
        throw std::invalid_argument("make_teardrop: opening angle must be in (0, 2 pi)");
    return std::make_shared<TeardropCurve>(opening_angle);
}

Mesh::Mesh(std::shared_ptr<Curve> curve, int n_panels, Grading grading)
    : curve_(std::move(curve)), grading_(grading) {
    if (n_panels < 4) throw std::invalid_argument("make_mesh: need at least 4 panels");
    auto corners = curve_->corners();
    if (grading.kind == Grading::Kind::dyadic && corners.empty()) {
        // refinement requested on a smooth curve: warn by downgrading
        grading_.kind = Grading::Kind::none;
    }

    // Base panels: uniform in parameter (comparable arclength on the
    // built-in shapes). Corners are forced to be panel endpoints: all
    // built-ins have corners only at t = 0.
    std::vector<double> breaks(n_panels + 1);
    for (int i = 0; i <= n_panels; ++i) breaks[i] = double(i) / n_panels;

    struct Interval {
        double a, b;
        bool corner;
    };
    std::vector<Interval> iv;
    const bool graded = grading_.kind == Grading::Kind::dyadic;
    for (int i = 0; i < n_panels; ++i) {
        double a = breaks[i], b = breaks[i + 1];
        bool first = (i == 0), last = (i == n_panels - 1);
        if (graded && first) {
            // dyadic refinement toward the corner at t=0
            double len = b - a;
            std::vector<Interval> sub;
            double lo = len / std::pow(2.0, grading_.levels);
            sub.push_back({0.0, lo, true});
            for (int l = grading_.levels; l >= 1; --l)
                sub.push_back({len / std::pow(2.0, l), len / std::pow(2.0, l - 1), false});
            for (auto& s : sub) iv.push_back(s);
        } else if (graded && last) {
            // dyadic refinement toward the corner at t=1, coarse to fine
            double len = b - a;
            for (int l = 1; l <= grading_.levels; ++l)
                iv.push_back({b - len / std::pow(2.0, l - 1), b - len / std::pow(2.0, l), false});
            iv.push_back({b - len / std::pow(2.0, grading_.levels), b, true});
        } else {
            iv.push_back({a, b, first || last});
        }
    }

    const Row& gx = gl16_nodes();
    const Row& gw = gl16_weights();
    panels_.reserve(iv.size());
    nodes_.reserve(iv.size() * kPanelOrder);
    for (auto& seg : iv) {
        Panel p;
        p.t0 = seg.a;
        p.t1 = seg.b;
        p.first_node = int(nodes_.size());
        p.touches_corner = seg.corner && !corners.empty();
        double mid = 0.5 * (seg.a + seg.b), half = 0.5 * (seg.b - seg.a);
        double arc = 0;
        for (int j = 0; j < kPanelOrder; ++j) {
            Node nd;
            nd.t = mid + half * gx[j];
            nd.pos = curve_->position(nd.t);
            Vec2 d = curve_->derivative(nd.t);
            nd.speed = d.norm();
            if (nd.speed <= 0) throw std::runtime_error("make_mesh: vanishing |z'|");
            nd.tau = d / nd.speed;
            nd.nu = {nd.tau.y, -nd.tau.x};
            nd.weight = gw[j] * half;
            nd.panel = int(panels_.size());
            arc += nd.weight * nd.speed;
            nodes_.push_back(nd);
        }
        p.arclength = arc;
        total_arclength_ += arc;
        max_panel_arclength_ = std::max(max_panel_arclength_, arc);
        panels_.push_back(p);
    }

    // Counter-clockwise check via the signed area (1/2) oint <x, nu> dsigma.
    double area2 = 0;
    for (int j = 0; j < n_nodes(); ++j)
        area2 += nodes_[j].pos.dot(nodes_[j].nu) * dsigma(j);
    if (area2 <= 0) throw std::runtime_error("make_mesh: orientation is not counter-clockwise");

    int m = curve_->cyclic_symmetry();
    if (!graded) {
        if (m == 0)
            sectors_ = n_panels;
        else
            sectors_ = std::gcd(n_panels, m) == m && n_panels % m == 0 ? m : 1;
    }
}

bool Mesh::adjacent(int a, int b) const {
    if (a == b) return false;
    int n = int(panels_.size());
    return (a + 1) % n == b || (b + 1) % n == a;
}

std::shared_ptr<Mesh> make_mesh(std::shared_ptr<Curve> curve, int n_panels, Grading grading) {
    return std::make_shared<Mesh>(std::move(curve), n_panels, grading);
}

int winding_number(const Mesh& mesh, Vec2 p) {
    // Crossing count over the closed node polygon.
    const auto& nd = mesh.nodes();
    int n = int(nd.size());
    int cross = 0;
    for (int i = 0; i < n; ++i) {
        Vec2 a = nd[i].pos, b = nd[(i + 1) % n].pos;
        if ((a.y <= p.y) != (b.y <= p.y)) {
            double xint = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if (xint > p.x) cross ^= 1;
        }
    }
    return cross;
}

double distance_to_nodes(const Mesh& mesh, Vec2 p) {
    double d2 = 1e300;
    for (const auto& nd : mesh.nodes()) d2 = std::min(d2, (nd.pos - p).norm2());
    return std::sqrt(d2);
}

}  // namespace dirac2d
