#include "liftdual/grid.hpp"

#include <cmath>
#include <limits>
#include <queue>

namespace liftdual {

GridSpec GridSpec::line(double x0, double x1, int nx, double m, double M, int nt) {
    GridSpec g;
    g.dim = 1;
    g.n = {nx, 1};
    g.nt = nt;
    g.h = (x1 - x0) / nx;
    g.ht = (M - m) / nt;
    g.origin = {x0, 0.0};
    g.t_min = m;
    g.t_max = M;
    g.validate();
    return g;
}

GridSpec GridSpec::box(std::array<double, 2> lo, double h, std::array<int, 2> n, double m, double M, int nt) {
    GridSpec g;
    g.dim = 2;
    g.n = n;
    g.nt = nt;
    g.h = h;
    g.ht = (M - m) / nt;
    g.origin = lo;
    g.t_min = m;
    g.t_max = M;
    g.validate();
    return g;
}

void GridSpec::validate() const {
    if (dim != 1 && dim != 2) throw GridError("dim must be 1 or 2");
    if (!(h > 0.0) || !(ht > 0.0)) throw GridError("mesh sizes must be positive");
    if (n[0] < 2 || nt < 2) throw GridError("cell counts must be >= 2");
    if (dim == 1 && n[1] != 1) throw GridError("1D grid must have n[1] == 1");
    if (dim == 2 && n[1] < 2) throw GridError("cell counts must be >= 2");
    if (!(t_min < t_max)) throw GridError("t_range must satisfy m < M");
    double span = t_max - t_min;
    double eps = std::numeric_limits<double>::epsilon();
    if (std::abs(nt * ht - span) > 4 * eps * std::max({std::abs(t_min), std::abs(t_max), span}))
        throw GridError("nt * ht must equal M - m");
}

int DomainMask::count_inside() const {
    int c = 0;
    for (auto b : inside) c += b != 0;
    return c;
}

bool DomainMask::has_neumann(const GridSpec& g) const {
    for (int j = 0; j < g.n[1]; ++j)
        for (int i = 0; i <= g.n[0]; ++i)
            if (xface_neumann(g, i, j)) return true;
    if (g.dim == 2)
        for (int j = 0; j <= g.n[1]; ++j)
            for (int i = 0; i < g.n[0]; ++i)
                if (yface_neumann(g, i, j)) return true;
    return false;
}

void DomainMask::set_neumann(const GridSpec& g, const std::function<bool(double, double)>& pred) {
    for (int j = 0; j < g.n[1]; ++j)
        for (int i = 0; i <= g.n[0]; ++i)
            if (xface_boundary(g, i, j) && pred(g.origin[0] + i * g.h, g.dim == 2 ? g.y_center(j) : 0.0))
                x_kind[g.xface(i, j)] = BoundaryKind::Neumann;
    if (g.dim == 2)
        for (int j = 0; j <= g.n[1]; ++j)
            for (int i = 0; i < g.n[0]; ++i)
                if (yface_boundary(g, i, j) && pred(g.x_center(i), g.origin[1] + j * g.h))
                    y_kind[g.yface(i, j)] = BoundaryKind::Neumann;
}

namespace {

bool connected(const GridSpec& g, const std::vector<std::uint8_t>& in) {
    int start = -1, total = 0;
    for (int c = 0; c < g.ncols(); ++c)
        if (in[c]) {
            if (start < 0) start = c;
            ++total;
        }
    std::vector<std::uint8_t> seen(in.size(), 0);
    std::queue<int> q;
    q.push(start);
    seen[start] = 1;
    int reached = 0;
    while (!q.empty()) {
        int c = q.front();
        q.pop();
        ++reached;
        int i = c % g.n[0], j = c / g.n[0];
        const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
        for (int d = 0; d < 4; ++d) {
            int a = i + di[d], b = j + dj[d];
            if (a < 0 || b < 0 || a >= g.n[0] || b >= g.n[1]) continue;
            int nc = g.col(a, b);
            if (in[nc] && !seen[nc]) {
                seen[nc] = 1;
                q.push(nc);
            }
        }
    }
    return reached == total;
}

// The inside region must also be simply connected in the sense that the
// outside is connected to the box border; a hole would leave a lateral
// boundary that the caller did not describe.
bool has_hole(const GridSpec& g, const std::vector<std::uint8_t>& in) {
    int w = g.n[0] + 2, hgt = g.n[1] + 2;
    std::vector<std::uint8_t> seen(std::size_t(w) * hgt, 0);
    auto outside = [&](int i, int j) {
        if (i < 0 || j < 0 || i >= g.n[0] || j >= g.n[1]) return true;
        return in[g.col(i, j)] == 0;
    };
    std::queue<std::pair<int, int>> q;
    q.push({-1, -1});
    seen[0] = 1;
    while (!q.empty()) {
        auto [i, j] = q.front();
        q.pop();
        const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
        for (int d = 0; d < 4; ++d) {
            int a = i + di[d], b = j + dj[d];
            if (a < -1 || b < -1 || a > g.n[0] || b > g.n[1]) continue;
            std::size_t p = std::size_t(b + 1) * w + (a + 1);
            if (seen[p] || !outside(a, b)) continue;
            seen[p] = 1;
            q.push({a, b});
        }
    }
    for (int j = 0; j < g.n[1]; ++j)
        for (int i = 0; i < g.n[0]; ++i)
            if (!in[g.col(i, j)] && !seen[std::size_t(j + 1) * w + (i + 1)]) return true;
    return false;
}

}  // namespace

Domain make_grid(const GridSpec& spec, const Shape& shape) {
    spec.validate();
    Domain d{spec, {}};
    const GridSpec& g = d.grid;
    auto& in = d.mask.inside;
    in.assign(g.ncols(), 0);
    if (std::holds_alternative<Rectangle>(shape)) {
        std::fill(in.begin(), in.end(), 1);
    } else if (auto* disc = std::get_if<Disc>(&shape)) {
        if (g.dim != 2) throw GridError("disc shape needs a 2D grid");
        for (int j = 0; j < g.n[1]; ++j)
            for (int i = 0; i < g.n[0]; ++i) {
                double dx = g.x_center(i) - disc->center[0], dy = g.y_center(j) - disc->center[1];
                in[g.col(i, j)] = dx * dx + dy * dy < disc->radius * disc->radius;
            }
    } else {
        auto& em = std::get<ExplicitMask>(shape);
        if (em.inside.size() != in.size()) throw GridError("explicit mask size does not match grid");
        for (std::size_t c = 0; c < in.size(); ++c) in[c] = em.inside[c] != 0;
    }
    if (d.mask.count_inside() == 0) throw GridError("empty interior");
    if (!connected(g, in)) throw GridError("disconnected interior");
    if (g.dim == 2 && has_hole(g, in)) throw GridError("disconnected interior (mask has a hole)");
    d.mask.x_kind.assign(g.n_xfaces(), BoundaryKind::Dirichlet);
    d.mask.y_kind.assign(g.n_yfaces(), BoundaryKind::Dirichlet);
    return d;
}

BoundaryGhosts BoundaryGhosts::zero(const GridSpec& g) { return constant(g, 0.0); }

BoundaryGhosts BoundaryGhosts::constant(const GridSpec& g, double c) {
    BoundaryGhosts b;
    b.lateral.assign(std::size_t(g.n[0] + 2) * (g.n[1] + 2) * g.nt, c);
    b.bottom = c;
    b.top = c;
    return b;
}

BoundaryGhosts BoundaryGhosts::subgraph(const GridSpec& g, const std::function<double(double, double)>& u0) {
    BoundaryGhosts b;
    b.lateral.assign(std::size_t(g.n[0] + 2) * (g.n[1] + 2) * g.nt, 0.0);
    for (int j = -1; j <= g.n[1]; ++j)
        for (int i = -1; i <= g.n[0]; ++i) {
            double y = g.dim == 2 ? g.y_center(j) : 0.0;
            double u = u0(g.x_center(i), y);
            std::size_t base = std::size_t(padded_col(g, i, j)) * g.nt;
            for (int k = 0; k < g.nt; ++k) b.lateral[base + k] = g.t_center(k) <= u ? 1.0 : 0.0;
        }
    b.bottom = 1.0;
    b.top = 0.0;
    return b;
}

void check_shape(const GridSpec& g, const ScalarField& v) {
    if (v.values.size() != g.ncells()) throw GridError("scalar field shape mismatch");
}

void check_shape(const GridSpec& g, const FluxField& s) {
    if (s.sx.size() != std::size_t(g.n_xfaces()) * g.nt || s.sy.size() != std::size_t(g.n_yfaces()) * g.nt ||
        s.st.size() != std::size_t(g.ncols()) * (g.nt + 1))
        throw GridError("flux field shape mismatch");
}

void gradient_into(const GridSpec& g, const DomainMask& mask, const ScalarField& v,
                   const BoundaryGhosts& ghosts, FluxField& out) {
    check_shape(g, v);
    if (out.sx.size() != std::size_t(g.n_xfaces()) * g.nt) out = FluxField(g);
    const int nt = g.nt;
    const double ih = 1.0 / g.h, iht = 1.0 / g.ht;
    const double* V = v.values.data();
    auto value = [&](int i, int j, int k) {
        return mask.in(g, i, j) ? V[std::size_t(g.col(i, j)) * nt + k] : ghosts.at(g, i, j, k);
    };
    for (int j = 0; j < g.n[1]; ++j)
        for (int i = 0; i <= g.n[0]; ++i) {
            double* o = out.sx.data() + std::size_t(g.xface(i, j)) * nt;
            if (!mask.xface_active(g, i, j)) {
                std::fill(o, o + nt, 0.0);
                continue;
            }
            for (int k = 0; k < nt; ++k) o[k] = (value(i, j, k) - value(i - 1, j, k)) * ih;
        }
    if (g.dim == 2)
        for (int j = 0; j <= g.n[1]; ++j)
            for (int i = 0; i < g.n[0]; ++i) {
                double* o = out.sy.data() + std::size_t(g.yface(i, j)) * nt;
                if (!mask.yface_active(g, i, j)) {
                    std::fill(o, o + nt, 0.0);
                    continue;
                }
                for (int k = 0; k < nt; ++k) o[k] = (value(i, j, k) - value(i, j - 1, k)) * ih;
            }
    for (int c = 0; c < g.ncols(); ++c) {
        double* o = out.st.data() + std::size_t(c) * (nt + 1);
        if (!mask.inside[c]) {
            std::fill(o, o + nt + 1, 0.0);
            continue;
        }
        const double* col = V + std::size_t(c) * nt;
        o[0] = (col[0] - ghosts.bottom) * iht;
        for (int k = 1; k < nt; ++k) o[k] = (col[k] - col[k - 1]) * iht;
        o[nt] = (ghosts.top - col[nt - 1]) * iht;
    }
}

FluxField gradient(const GridSpec& g, const DomainMask& mask, const ScalarField& v, const BoundaryGhosts& ghosts) {
    FluxField out(g);
    gradient_into(g, mask, v, ghosts, out);
    return out;
}

void divergence_into(const GridSpec& g, const DomainMask& mask, const FluxField& sig, ScalarField& out) {
    check_shape(g, sig);
    if (out.values.size() != g.ncells()) out = ScalarField(g);
    const int nt = g.nt;
    const double ih = 1.0 / g.h, iht = 1.0 / g.ht;
    for (int j = 0; j < g.n[1]; ++j)
        for (int i = 0; i < g.n[0]; ++i) {
            int c = g.col(i, j);
            double* o = out.values.data() + std::size_t(c) * nt;
            if (!mask.inside[c]) {
                std::fill(o, o + nt, 0.0);
                continue;
            }
            const double* xl = sig.sx.data() + std::size_t(g.xface(i, j)) * nt;
            const double* xr = sig.sx.data() + std::size_t(g.xface(i + 1, j)) * nt;
            const double* tt = sig.st.data() + std::size_t(c) * (nt + 1);
            for (int k = 0; k < nt; ++k) o[k] = (xr[k] - xl[k]) * ih + (tt[k + 1] - tt[k]) * iht;
            if (g.dim == 2) {
                const double* yl = sig.sy.data() + std::size_t(g.yface(i, j)) * nt;
                const double* yr = sig.sy.data() + std::size_t(g.yface(i, j + 1)) * nt;
                for (int k = 0; k < nt; ++k) o[k] += (yr[k] - yl[k]) * ih;
            }
        }
}

ScalarField divergence(const GridSpec& g, const DomainMask& mask, const FluxField& sig) {
    ScalarField out(g);
    divergence_into(g, mask, sig, out);
    return out;
}

double operator_norm_bound(const GridSpec& g) {
    double s = g.dim / (g.h * g.h) + 1.0 / (g.ht * g.ht);
    return 2.0 * std::sqrt(s);
}

double inner_cells(const GridSpec& g, const DomainMask& mask, const ScalarField& a, const ScalarField& b) {
    double s = 0.0;
    for (int c = 0; c < g.ncols(); ++c) {
        if (!mask.inside[c]) continue;
        for (int k = 0; k < g.nt; ++k) {
            std::size_t p = std::size_t(c) * g.nt + k;
            s += a.values[p] * b.values[p];
        }
    }
    return s * g.cell_volume();
}

double inner_faces(const GridSpec& g, const DomainMask& mask, const FluxField& a, const FluxField& b) {
    double s = 0.0;
    const int nt = g.nt;
    for (int j = 0; j < g.n[1]; ++j)
        for (int i = 0; i <= g.n[0]; ++i) {
            if (!mask.xface_active(g, i, j)) continue;
            std::size_t p = std::size_t(g.xface(i, j)) * nt;
            for (int k = 0; k < nt; ++k) s += a.sx[p + k] * b.sx[p + k];
        }
    if (g.dim == 2)
        for (int j = 0; j <= g.n[1]; ++j)
            for (int i = 0; i < g.n[0]; ++i) {
                if (!mask.yface_active(g, i, j)) continue;
                std::size_t p = std::size_t(g.yface(i, j)) * nt;
                for (int k = 0; k < nt; ++k) s += a.sy[p + k] * b.sy[p + k];
            }
    for (int c = 0; c < g.ncols(); ++c) {
        if (!mask.inside[c]) continue;
        std::size_t p = std::size_t(c) * (nt + 1);
        for (int k = 0; k <= nt; ++k) s += a.st[p + k] * b.st[p + k];
    }
    return s * g.cell_volume();
}

}  // namespace liftdual
