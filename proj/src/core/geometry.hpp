#ifndef DIRAC2D_GEOMETRY_HPP
#define DIRAC2D_GEOMETRY_HPP

#include <memory>
#include <string>
#include <vector>

#include "types.hpp"

namespace dirac2d {

/// Closed curve parametrized over t in [0,1), oriented counter-clockwise.
/// The outward unit normal nu points into the exterior domain and
/// tau = *nu (rotation by +pi/2) is the counter-clockwise tangent.
class Curve {
public:
    virtual ~Curve() = default;
    virtual Vec2 position(double t) const = 0;
    virtual Vec2 derivative(double t) const = 0;
    virtual std::string name() const = 0;
    /// Parameters of corner points (panel endpoints must land on these).
    virtual std::vector<double> corners() const { return {}; }
    /// Order of exact cyclic (rotation by 2*pi/m) symmetry; 1 if none.
    virtual int cyclic_symmetry() const { return 1; }
    virtual std::vector<std::pair<std::string, double>> params() const { return {}; }
};

std::shared_ptr<Curve> make_circle(double radius);
std::shared_ptr<Curve> make_starfish(int arms = 5, double amplitude = 0.3);
std::shared_ptr<Curve> make_teardrop(double opening_angle);

struct Grading {
    enum class Kind { none, dyadic } kind = Kind::none;
    int levels = 0;
    static Grading none() { return {}; }
    static Grading dyadic(int levels) { return {Kind::dyadic, levels}; }
};

struct Panel {
    double t0, t1;           // parameter interval
    int first_node;          // index of its first node (16 nodes per panel)
    double arclength;
    bool touches_corner;     // one endpoint is a corner parameter
};

struct Node {
    double t;
    Vec2 pos;
    Vec2 nu, tau;    // outward normal, ccw tangent; det[nu tau] = +1
    double speed;    // |z'(t)|
    double weight;   // Gauss-Legendre weight * dt/2 (parameter measure)
    int panel;
};

/// Composite 16-point Gauss-Legendre panel mesh on a curve.
class Mesh {
public:
    Mesh(std::shared_ptr<Curve> curve, int n_panels, Grading grading);

    const Curve& curve() const { return *curve_; }
    std::shared_ptr<Curve> curve_ptr() const { return curve_; }
    const std::vector<Panel>& panels() const { return panels_; }
    const std::vector<Node>& nodes() const { return nodes_; }
    int n_nodes() const { return int(nodes_.size()); }
    const Grading& grading() const { return grading_; }

    /// sigma-measure weight of node j: weight * speed.
    double dsigma(int j) const { return nodes_[j].weight * nodes_[j].speed; }
    double total_arclength() const { return total_arclength_; }
    /// Largest panel arclength (near-zone length scale).
    double max_panel_arclength() const { return max_panel_arclength_; }

    /// True if panels a and b share an endpoint (curve is closed).
    bool adjacent(int a, int b) const;

    /// Number of mesh sectors under the curve's cyclic symmetry, if the
    /// panelization respects it (panel count divisible by the symmetry
    /// order and no grading); else 1.
    int symmetry_sectors() const { return sectors_; }

private:
    std::shared_ptr<Curve> curve_;
    Grading grading_;
    std::vector<Panel> panels_;
    std::vector<Node> nodes_;
    double total_arclength_ = 0;
    double max_panel_arclength_ = 0;
    int sectors_ = 1;
};

std::shared_ptr<Mesh> make_mesh(std::shared_ptr<Curve> curve, int n_panels,
                                Grading grading = Grading::none());

/// Winding number of the mesh node polygon around p (1 inside, 0 outside).
int winding_number(const Mesh& mesh, Vec2 p);

/// Distance from p to the nearest mesh node.
double distance_to_nodes(const Mesh& mesh, Vec2 p);

}  // namespace dirac2d

#endif
