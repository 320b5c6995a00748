#include "liftdual/project.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace liftdual {

namespace {

double radius_bracketed(double A, double b, double s) {
    auto f = [&](double r) { return (A * r * r + b) * r - s; };
    // f(hi) >= 0 and f is convex on r >= 0, so Newton from hi decreases monotonically to the root
    double lo = 0.0;
    double hi = std::cbrt(s / A) + std::sqrt(std::max(0.0, -b) / A);
    double r = hi;
    for (int it = 0; it < 60; ++it) {
        double fr = f(r);
        if (fr > 0) hi = r;
        else lo = r;
        double d = 3 * A * r * r + b;
        double next = d > 0 ? r - fr / d : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - r) <= 1e-15 * std::max(1.0, r)) return next;
        r = next;
        if (hi - lo <= 1e-14 * std::max(1.0, hi)) break;
    }
    return r;
}

}  // namespace

double epigraph_radius(double a, double c, double qt, double s) {
    // positive root of A r^3 + b r - s = 0
    const double A = 2 * a * a;
    const double b = 1 + 2 * a * (c - qt);
    const double p = b / A, q = -s / A;
    const double disc = 0.25 * q * q + p * p * p / 27;
    double r;
    if (disc >= 0) {
        double u = std::cbrt(-0.5 * q + std::sqrt(disc));
        r = p > 0 ? -q / (u * u + p / 3 + p * p / (9 * u * u)) : u - p / (3 * u);
    } else {
        double m = std::sqrt(-p / 3);
        double arg = std::clamp(-0.5 * q / (m * m * m), -1.0, 1.0);
        r = 2 * m * std::cos(std::acos(arg) / 3);
    }
    for (int it = 0; it < 3; ++it) {
        double d = 3 * A * r * r + b;
        if (!(d > 0)) break;
        double next = r - ((A * r * r + b) * r - s) / d;
        if (next == r) break;
        r = next;
    }
    if (!(r > 0) || !std::isfinite(r) || std::abs((A * r * r + b) * r - s) > 1e-12 * (s + std::abs(b) * r + A * r * r * r))
        return radius_bracketed(A, b, s);
    return r;
}

void project_epigraph(std::span<const double> q, double a, double c, std::span<double> out) {
    if (!(a > 0)) throw Error("project_epigraph: a must be positive");
    const std::size_t n = q.size() - 1;
    double s2 = 0.0;
    for (std::size_t k = 0; k < n; ++k) s2 += q[k] * q[k];
    const double qt = q[n];
    if (qt >= a * s2 + c) {
        if (out.data() != q.data()) std::copy(q.begin(), q.end(), out.begin());
        return;
    }
    double s = std::sqrt(s2);
    if (s == 0.0) {
        for (std::size_t k = 0; k < n; ++k) out[k] = 0.0;
        out[n] = c;
        return;
    }
    double r = epigraph_radius(a, c, qt, s);
    double scale = r / s;
    for (std::size_t k = 0; k < n; ++k) out[k] = q[k] * scale;
    out[n] = a * r * r + c;
}

namespace {

// projects every active face vector of one family in place
void project_family(std::array<std::vector<double>, 3>& fam, const std::vector<std::uint8_t>& active,
                    std::size_t layers, std::size_t offset, const std::vector<Paraboloid>& par, int D) {
    const std::size_t nl = par.size();
    double* comp[3] = {fam[0].data(), D > 1 ? fam[1].data() : nullptr, D > 2 ? fam[2].data() : nullptr};
    for (std::size_t p = 0; p < active.size(); ++p) {
        if (!active[p]) continue;
        const std::size_t base = p * layers + offset;
        for (std::size_t l = 0; l < nl; ++l) {
            const std::size_t idx = base + l;
            const double a = par[l].a, c = par[l].c;
            double qt = comp[D - 1][idx];
            double s2 = 0.0;
            for (int d = 0; d < D - 1; ++d) s2 += comp[d][idx] * comp[d][idx];
            if (qt >= a * s2 + c) continue;
            double s = std::sqrt(s2);
            if (s == 0.0) {
                comp[D - 1][idx] = c;
                continue;
            }
            double r = epigraph_radius(a, c, qt, s);
            double scale = r / s;
            for (int d = 0; d < D - 1; ++d) comp[d][idx] *= scale;
            comp[D - 1][idx] = a * r * r + c;
        }
    }
}

}  // namespace

void apply_K_projection(FaceVectorField& s, const Lifting& lift, const LevelParams& lp) {
    const int D = lift.components();
    project_family(s.x, lift.x_active(), lift.xlayers(), 0, lp.spatial, D);
    if (lift.grid().dim == 2) project_family(s.y, lift.y_active(), lift.xlayers(), 0, lp.spatial, D);
    project_family(s.t, lift.t_active(), lift.tlevels(), 1, lp.vertical, D);
}

double min_feasibility_slack(const FaceVectorField& s, const Lifting& lift, const LevelParams& lp) {
    const int D = lift.components();
    double worst = std::numeric_limits<double>::infinity();
    auto scan = [&](const std::array<std::vector<double>, 3>& fam, const std::vector<std::uint8_t>& active,
                    std::size_t layers, std::size_t offset, const std::vector<Paraboloid>& par) {
        for (std::size_t p = 0; p < active.size(); ++p) {
            if (!active[p]) continue;
            for (std::size_t l = 0; l < par.size(); ++l) {
                std::size_t idx = p * layers + offset + l;
                double s2 = 0.0;
                for (int d = 0; d < D - 1; ++d) s2 += fam[d][idx] * fam[d][idx];
                worst = std::min(worst, fam[D - 1][idx] - par[l].a * s2 - par[l].c);
            }
        }
    };
    scan(s.x, lift.x_active(), lift.xlayers(), 0, lp.spatial);
    if (lift.grid().dim == 2) scan(s.y, lift.y_active(), lift.xlayers(), 0, lp.spatial);
    scan(s.t, lift.t_active(), lift.tlevels(), 1, lp.vertical);
    return worst;
}

namespace {

// indices kk of horizontal planes at D and {m, M}, with the bound -f(d,0)
std::vector<std::pair<int, double>> slice_planes(const ProblemSpec& p) {
    const auto& g = p.grid;
    std::vector<std::pair<int, double>> planes;
    std::vector<double> levels = p.integrand.disc_set;
    levels.push_back(g.t_min);
    levels.push_back(g.t_max);
    for (double d : levels) {
        if (d < g.t_min || d > g.t_max) continue;
        int kk = std::clamp(int(std::lround((d - g.t_min) / g.ht)), 0, g.nt);
        planes.push_back({kk, p.integrand.neg_f0(d)});
    }
    return planes;
}

}  // namespace

void apply_slice_constraints(FluxField& sig, const ProblemSpec& p) {
    const auto& g = p.grid;
    for (auto [kk, bound] : slice_planes(p))
        for (int c = 0; c < g.ncols(); ++c) {
            if (!p.mask.inside[c]) continue;
            double& v = sig.st[std::size_t(c) * (g.nt + 1) + kk];
            v = std::max(v, bound);
        }
}

void apply_slice_constraints(FaceVectorField& s, const Lifting& lift, const ProblemSpec& p) {
    const int D = lift.components();
    const auto& act = lift.t_active();
    for (auto [kk, bound] : slice_planes(p))
        for (std::size_t q = 0; q < act.size(); ++q) {
            if (!act[q]) continue;
            double& v = s.t[D - 1][q * lift.tlevels() + kk + 1];
            v = std::max(v, bound);
        }
}

void project_primal(ScalarField& v) {
    for (double& x : v.values) x = std::clamp(x, 0.0, 1.0);
}

void project_neumann_trace(FluxField& sig, const ProblemSpec& p) {
    const auto& g = p.grid;
    const auto& mk = p.mask;
    for (int j = 0; j < g.n[1]; ++j)
        for (int i = 0; i <= g.n[0]; ++i) {
            if (!mk.xface_neumann(g, i, j)) continue;
            // outward normal is -e_x when the inside cell is on the right
            double sign = mk.in(g, i, j) ? 1.0 : -1.0;
            double* o = sig.sx.data() + std::size_t(g.xface(i, j)) * g.nt;
            for (int k = 0; k < g.nt; ++k) o[k] = sign * p.gamma_prime(g.t_center(k));
        }
    if (g.dim == 2)
        for (int j = 0; j <= g.n[1]; ++j)
            for (int i = 0; i < g.n[0]; ++i) {
                if (!mk.yface_neumann(g, i, j)) continue;
                double sign = mk.in(g, i, j) ? 1.0 : -1.0;
                double* o = sig.sy.data() + std::size_t(g.yface(i, j)) * g.nt;
                for (int k = 0; k < g.nt; ++k) o[k] = sign * p.gamma_prime(g.t_center(k));
            }
}

}  // namespace liftdual
