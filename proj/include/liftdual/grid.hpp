#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace liftdual {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct GridError : Error {
    using Error::Error;
};

// Cells of the cylinder are indexed column-major in t: cell = col * nt + k,
// col = j * n[0] + i.  One-dimensional problems use n[1] == 1.
struct GridSpec {
    int dim = 1;
    std::array<int, 2> n{2, 1};
    int nt = 2;
    double h = 1.0;
    double ht = 1.0;
    std::array<double, 2> origin{0.0, 0.0};
    double t_min = 0.0;
    double t_max = 1.0;

    static GridSpec line(double x0, double x1, int nx, double m, double M, int nt);
    static GridSpec box(std::array<double, 2> lo, double h, std::array<int, 2> n,
                        double m, double M, int nt);

    void validate() const;

    int ncols() const { return n[0] * n[1]; }
    std::size_t ncells() const { return std::size_t(ncols()) * nt; }
    int col(int i, int j) const { return j * n[0] + i; }
    double cell_volume() const { return (dim == 2 ? h * h : h) * ht; }
    double column_area() const { return dim == 2 ? h * h : h; }
    double x_center(int i) const { return origin[0] + (i + 0.5) * h; }
    double y_center(int j) const { return origin[1] + (j + 0.5) * h; }
    double t_center(int k) const { return t_min + (k + 0.5) * ht; }
    double t_face(int k) const { return t_min + k * ht; }

    // face positions: x-faces (i, j) with i in [0, n0], y-faces with j in [0, n1]
    int n_xfaces() const { return (n[0] + 1) * n[1]; }
    int n_yfaces() const { return dim == 2 ? n[0] * (n[1] + 1) : 0; }
    int xface(int i, int j) const { return j * (n[0] + 1) + i; }
    int yface(int i, int j) const { return j * n[0] + i; }
};

enum class BoundaryKind : std::uint8_t { Dirichlet = 0, Neumann = 1 };

struct DomainMask {
    std::vector<std::uint8_t> inside;       // per column
    std::vector<BoundaryKind> x_kind;       // per x-face position
    std::vector<BoundaryKind> y_kind;       // per y-face position

    bool in(const GridSpec& g, int i, int j) const {
        if (i < 0 || j < 0 || i >= g.n[0] || j >= g.n[1]) return false;
        return inside[g.col(i, j)] != 0;
    }
    // face carries a gradient when at least one neighbour is inside
    bool xface_active(const GridSpec& g, int i, int j) const { return in(g, i - 1, j) || in(g, i, j); }
    bool yface_active(const GridSpec& g, int i, int j) const { return in(g, i, j - 1) || in(g, i, j); }
    bool xface_boundary(const GridSpec& g, int i, int j) const { return in(g, i - 1, j) != in(g, i, j); }
    bool yface_boundary(const GridSpec& g, int i, int j) const { return in(g, i, j - 1) != in(g, i, j); }
    bool xface_neumann(const GridSpec& g, int i, int j) const {
        return xface_boundary(g, i, j) && x_kind[g.xface(i, j)] == BoundaryKind::Neumann;
    }
    bool yface_neumann(const GridSpec& g, int i, int j) const {
        return yface_boundary(g, i, j) && y_kind[g.yface(i, j)] == BoundaryKind::Neumann;
    }
    int count_inside() const;
    bool has_neumann(const GridSpec& g) const;

    // marks every boundary face whose centre satisfies pred(x, y) as Neumann
    void set_neumann(const GridSpec& g, const std::function<bool(double, double)>& pred);
};

struct Rectangle {};
struct Disc {
    std::array<double, 2> center{0.0, 0.0};
    double radius = 1.0;
};
struct ExplicitMask {
    std::vector<std::uint8_t> inside;
};
using Shape = std::variant<Rectangle, Disc, ExplicitMask>;

struct Domain {
    GridSpec grid;
    DomainMask mask;
};

Domain make_grid(const GridSpec& spec, const Shape& shape);

struct ScalarField {
    std::vector<double> values;  // grid.ncells(); outside columns stay 0

    ScalarField() = default;
    explicit ScalarField(const GridSpec& g, double fill = 0.0) : values(g.ncells(), fill) {}
};

struct FluxField {
    std::vector<double> sx;  // n_xfaces * nt
    std::vector<double> sy;  // n_yfaces * nt
    std::vector<double> st;  // ncols * (nt + 1), includes the t=m and t=M slab faces

    FluxField() = default;
    explicit FluxField(const GridSpec& g)
        : sx(std::size_t(g.n_xfaces()) * g.nt, 0.0),
          sy(std::size_t(g.n_yfaces()) * g.nt, 0.0),
          st(std::size_t(g.ncols()) * (g.nt + 1), 0.0) {}
};

// Values outside the cylinder.  Lateral ghosts live on a padded column grid
// (n0+2) x (n1+2), column (i, j) -> (j+1)*(n0+2) + (i+1).
struct BoundaryGhosts {
    std::vector<double> lateral;
    double bottom = 1.0;
    double top = 0.0;

    static int padded_col(const GridSpec& g, int i, int j) { return (j + 1) * (g.n[0] + 2) + (i + 1); }
    double at(const GridSpec& g, int i, int j, int k) const {
        return lateral[std::size_t(padded_col(g, i, j)) * g.nt + k];
    }

    static BoundaryGhosts zero(const GridSpec& g);
    static BoundaryGhosts constant(const GridSpec& g, double c);
    // lateral ghost 1_{t_k <= u0(x)}, bottom 1, top 0
    static BoundaryGhosts subgraph(const GridSpec& g, const std::function<double(double, double)>& u0);
};

void gradient_into(const GridSpec& g, const DomainMask& mask, const ScalarField& v,
                   const BoundaryGhosts& ghosts, FluxField& out);
FluxField gradient(const GridSpec& g, const DomainMask& mask, const ScalarField& v,
                   const BoundaryGhosts& ghosts);

void divergence_into(const GridSpec& g, const DomainMask& mask, const FluxField& sig, ScalarField& out);
ScalarField divergence(const GridSpec& g, const DomainMask& mask, const FluxField& sig);

double operator_norm_bound(const GridSpec& g);

// volume-weighted inner products over inside cells / active faces
double inner_cells(const GridSpec& g, const DomainMask& mask, const ScalarField& a, const ScalarField& b);
double inner_faces(const GridSpec& g, const DomainMask& mask, const FluxField& a, const FluxField& b);

void check_shape(const GridSpec& g, const ScalarField& v);
void check_shape(const GridSpec& g, const FluxField& s);

}  // namespace liftdual
