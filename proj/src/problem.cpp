#include "liftdual/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace liftdual {

namespace {

double sq_norm(std::span<const double> z) {
    double s = 0.0;
    for (double v : z) s += v * v;
    return s;
}

}  // namespace

Integrand alt_caffarelli(double lambda) {
    Integrand f;
    f.name = "alt_caffarelli";
    f.lambda = lambda;
    auto chi = [](double t) { return t > 0.0 ? 1.0 : 0.0; };
    f.eval = [=](double t, std::span<const double> z) { return 0.5 * sq_norm(z) + lambda * chi(t); };
    f.conj_z = [=](double t, std::span<const double> zs) { return 0.5 * sq_norm(zs) - lambda * chi(t); };
    f.parab = [=](double t) { return Paraboloid{0.5, -lambda * chi(t)}; };
    f.disc_set = {0.0};
    f.neg_f0 = [=](double t) { return -lambda * chi(t); };
    f.growth = {0.5, 2.0, lambda};
    f.grad_z = [](double, std::span<const double> z, std::span<double> out) {
        std::copy(z.begin(), z.end(), out.begin());
    };
    return f;
}

Integrand quadratic_convex() {
    Integrand f;
    f.name = "quadratic_convex";
    f.eval = [](double t, std::span<const double> z) { return 0.5 * sq_norm(z) + 0.5 * t * t; };
    f.conj_z = [](double t, std::span<const double> zs) { return 0.5 * sq_norm(zs) - 0.5 * t * t; };
    f.parab = [](double t) { return Paraboloid{0.5, -0.5 * t * t}; };
    f.neg_f0 = [](double t) { return -0.5 * t * t; };
    f.growth = {0.5, 2.0, 0.0};
    f.grad_z = [](double, std::span<const double> z, std::span<double> out) {
        std::copy(z.begin(), z.end(), out.begin());
    };
    f.convex = true;
    return f;
}

Integrand two_well(double eps, std::function<double(double)> W, double lambda) {
    Integrand f;
    f.name = "two_well";
    f.lambda = lambda;
    f.eval = [=](double t, std::span<const double> z) { return eps * sq_norm(z) + W(t) - lambda * t; };
    // sup_z z.z* - eps|z|^2 = |z*|^2 / (4 eps)
    f.conj_z = [=](double t, std::span<const double> zs) { return sq_norm(zs) / (4 * eps) - W(t) + lambda * t; };
    f.parab = [=](double t) { return Paraboloid{1.0 / (4 * eps), -W(t) + lambda * t}; };
    f.neg_f0 = [=](double t) { return -W(t) + lambda * t; };
    f.growth = {eps, 2.0, 0.0};
    f.grad_z = [=](double, std::span<const double> z, std::span<double> out) {
        for (std::size_t k = 0; k < z.size(); ++k) out[k] = 2 * eps * z[k];
    };
    return f;
}

double ProblemSpec::u0_clamped(double x, double y) const { return std::clamp(u0(x, y), m(), M()); }

double ProblemSpec::gamma(double t) const {
    // 5-point Gauss-Legendre on 16 panels; gamma' is Lipschitz so this is plenty
    static const double xg[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                                 0.9061798459386640};
    static const double wg[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                 0.4786286704993665, 0.2369268850561891};
    const int panels = 16;
    double s = 0.0, w = t / panels;
    for (int p = 0; p < panels; ++p) {
        double mid = (p + 0.5) * w;
        for (int q = 0; q < 5; ++q) s += wg[q] * gamma_prime(mid + 0.5 * w * xg[q]);
    }
    return 0.5 * w * s;
}

ProblemSpec make_problem(Integrand f, const Domain& d) {
    ProblemSpec p;
    p.integrand = std::move(f);
    p.grid = d.grid;
    p.mask = d.mask;
    return p;
}

double h_f(const Integrand& f, double t, std::span<const double> q) {
    const double qt = q.back();
    auto qx = q.first(q.size() - 1);
    if (qt > 0.0) return std::numeric_limits<double>::infinity();
    if (qt == 0.0) return sq_norm(qx) == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    double z[3];
    for (std::size_t k = 0; k < qx.size(); ++k) z[k] = -qx[k] / qt;
    return -qt * f.eval(t, std::span<const double>(z, qx.size()));
}

std::optional<Paraboloid> constraint_params(const Integrand& f, double t) {
    if (!f.parametric()) return std::nullopt;
    return f.parab(t);
}

BoundaryGhosts problem_ghosts(const ProblemSpec& p) {
    const auto& g = p.grid;
    const auto& mk = p.mask;
    auto b = BoundaryGhosts::subgraph(g, [&](double x, double y) { return p.u0_clamped(x, y); });
    // across a Neumann face the ghost repeats v0 of the inside cell, so the
    // face only carries the assigned trace
    auto copy_column = [&](int gi, int gj, int ii, int ij) {
        double u = p.u0_clamped(g.x_center(ii), g.dim == 2 ? g.y_center(ij) : 0.0);
        std::size_t base = std::size_t(BoundaryGhosts::padded_col(g, gi, gj)) * g.nt;
        for (int k = 0; k < g.nt; ++k) b.lateral[base + k] = g.t_center(k) <= u ? 1.0 : 0.0;
    };
    for (int j = 0; j < g.n[1]; ++j)
        for (int i = 0; i <= g.n[0]; ++i)
            if (mk.xface_neumann(g, i, j)) {
                if (mk.in(g, i, j)) copy_column(i - 1, j, i, j);
                else copy_column(i, j, i - 1, j);
            }
    if (g.dim == 2)
        for (int j = 0; j <= g.n[1]; ++j)
            for (int i = 0; i < g.n[0]; ++i)
                if (mk.yface_neumann(g, i, j)) {
                    if (mk.in(g, i, j)) copy_column(i, j - 1, i, j);
                    else copy_column(i, j, i, j - 1);
                }
    return b;
}

std::vector<double> u0_columns(const ProblemSpec& p) {
    const auto& g = p.grid;
    std::vector<double> u(g.ncols(), 0.0);
    for (int j = 0; j < g.n[1]; ++j)
        for (int i = 0; i < g.n[0]; ++i)
            u[g.col(i, j)] = p.u0_clamped(g.x_center(i), g.dim == 2 ? g.y_center(j) : 0.0);
    return u;
}

ScalarField reference_field(const ProblemSpec& p) {
    const auto& g = p.grid;
    ScalarField v(g);
    auto u = u0_columns(p);
    for (int c = 0; c < g.ncols(); ++c) {
        if (!p.mask.inside[c]) continue;
        for (int k = 0; k < g.nt; ++k) v.values[std::size_t(c) * g.nt + k] = g.t_center(k) <= u[c] ? 1.0 : 0.0;
    }
    return v;
}

std::vector<double> layer_levels(const GridSpec& g, const Integrand& f) {
    std::vector<double> out(g.nt + 2);
    for (int k = -1; k <= g.nt; ++k) {
        double best = 0.0, best_c = -std::numeric_limits<double>::infinity();
        for (double t : {g.t_face(k), g.t_center(k), g.t_face(k + 1)}) {
            double tc = std::clamp(t, g.t_min, g.t_max);
            double c = f.neg_f0(tc);
            if (c > best_c) {
                best_c = c;
                best = tc;
            }
        }
        out[k + 1] = best;
    }
    return out;
}

LevelParams level_params(const ProblemSpec& p) {
    const auto& g = p.grid;
    const auto& f = p.integrand;
    if (!f.parametric()) throw Error("generic integrand has no projector");
    LevelParams lp;
    lp.spatial_level = layer_levels(g, f);
    for (double t : lp.spatial_level) lp.spatial.push_back(f.parab(t));
    lp.vertical.resize(g.nt + 1);
    lp.vertical_level.resize(g.nt + 1);
    for (int kk = 0; kk <= g.nt; ++kk) lp.vertical_level[kk] = g.t_face(kk);
    for (double d : f.disc_set) {
        if (d < g.t_min || d > g.t_max) continue;
        int kk = int(std::lround((d - g.t_min) / g.ht));
        lp.vertical_level[std::clamp(kk, 0, g.nt)] = d;
    }
    for (int kk = 0; kk <= g.nt; ++kk) lp.vertical[kk] = f.parab(lp.vertical_level[kk]);
    return lp;
}

}  // namespace liftdual
