#include "liftdual/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "liftdual/solver.hpp"

namespace liftdual {

Profile extract_level(const ScalarField& v, double s, const GridSpec& g, const DomainMask& mask) {
    check_shape(g, v);
    if (!(s > 0.0 && s < 1.0)) throw Error("extract_level: s must lie in (0,1)");
    Profile out{std::vector<double>(g.ncols(), 0.0), mask};
    std::vector<double> w(g.nt);
    for (int c = 0; c < g.ncols(); ++c) {
        if (!mask.inside[c]) continue;
        const double* col = v.values.data() + std::size_t(c) * g.nt;
        double run = -std::numeric_limits<double>::infinity();
        for (int k = g.nt - 1; k >= 0; --k) {
            run = std::max(run, col[k]);
            w[k] = run;
        }
        double u = g.t_max;
        for (int k = 0; k < g.nt; ++k) {
            if (w[k] > s) continue;
            if (k == 0) {
                u = g.t_min;
            } else {
                double frac = (w[k - 1] - s) / (w[k - 1] - w[k]);
                u = g.t_center(k - 1) + frac * g.ht;
            }
            break;
        }
        out.u[c] = u;
    }
    return out;
}

double monotonicity_defect(const ScalarField& v, const GridSpec& g, const DomainMask& mask) {
    double s = 0.0;
    for (int c = 0; c < g.ncols(); ++c) {
        if (!mask.inside[c]) continue;
        const double* col = v.values.data() + std::size_t(c) * g.nt;
        for (int k = 0; k + 1 < g.nt; ++k) s += std::max(0.0, col[k + 1] - col[k]);
    }
    return s * g.cell_volume();
}

double positivity_threshold(const GridSpec& g) { return g.ht; }

namespace {

double snap_to_discontinuity(double u, const Integrand& f, double theta) {
    for (double d : f.disc_set)
        if (u > d && u <= d + theta) return d;
    return u;
}

}  // namespace

std::array<double, 2> profile_gradient(const Profile& u, const ProblemSpec& p, int i, int j) {
    const auto& g = p.grid;
    const auto& mk = p.mask;
    double uc = u.u[g.col(i, j)];
    std::array<double, 2> grad{0.0, 0.0};
    auto forward = [&](int a, int b, bool neumann, double x, double y) {
        if (mk.in(g, a, b)) return (u.u[g.col(a, b)] - uc) / g.h;
        if (neumann) return 0.0;
        return (p.u0_clamped(x, y) - uc) / g.h;
    };
    double yc = g.dim == 2 ? g.y_center(j) : 0.0;
    grad[0] = forward(i + 1, j, mk.xface_neumann(g, i + 1, j), g.x_center(i + 1), yc);
    if (g.dim == 2) grad[1] = forward(i, j + 1, mk.yface_neumann(g, i, j + 1), g.x_center(i), g.y_center(j + 1));
    return grad;
}

double primal_energy(const Profile& u, const ProblemSpec& p) {
    const auto& g = p.grid;
    const auto& mk = p.mask;
    const double theta = positivity_threshold(g);
    double e = 0.0;
    for (int j = 0; j < g.n[1]; ++j)
        for (int i = 0; i < g.n[0]; ++i) {
            if (!mk.in(g, i, j)) continue;
            auto grad = profile_gradient(u, p, i, j);
            double t = snap_to_discontinuity(u.u[g.col(i, j)], p.integrand, theta);
            e += p.integrand.eval(t, std::span<const double>(grad.data(), g.dim));
        }
    e *= g.column_area();
    // Neumann part of the boundary
    const double area = g.dim == 2 ? g.h : 1.0;
    for (int j = 0; j < g.n[1]; ++j)
        for (int i = 0; i <= g.n[0]; ++i)
            if (mk.xface_neumann(g, i, j)) {
                int c = mk.in(g, i, j) ? g.col(i, j) : g.col(i - 1, j);
                e += p.gamma(u.u[c]) * area;
            }
    if (g.dim == 2)
        for (int j = 0; j <= g.n[1]; ++j)
            for (int i = 0; i < g.n[0]; ++i)
                if (mk.yface_neumann(g, i, j)) {
                    int c = mk.in(g, i, j) ? g.col(i, j) : g.col(i, j - 1);
                    e += p.gamma(u.u[c]) * area;
                }
    return e;
}

double lifted_energy(const ScalarField& v, const ProblemSpec& p) { return lifted_energy(v, p, problem_ghosts(p)); }

double lifted_energy(const ScalarField& v, const ProblemSpec& p, const BoundaryGhosts& ghosts) {
    const auto& g = p.grid;
    const auto& mk = p.mask;
    FluxField grad = gradient(g, mk, v, ghosts);
    const auto levels = layer_levels(g, p.integrand);
    const int nt = g.nt;
    const double inf = std::numeric_limits<double>::infinity();
    double e = 0.0;
    for (int j = 0; j < g.n[1]; ++j)
        for (int i = 0; i < g.n[0]; ++i) {
            if (!mk.in(g, i, j)) continue;
            int c = g.col(i, j);
            // Neumann faces carry no gradient of their own
            const bool nl = mk.xface_neumann(g, i, j), nr = mk.xface_neumann(g, i + 1, j);
            const double* xl = grad.sx.data() + std::size_t(g.xface(i, j)) * nt;
            const double* xr = grad.sx.data() + std::size_t(g.xface(i + 1, j)) * nt;
            const double* yl = nullptr;
            const double* yr = nullptr;
            bool nb = false, na = false;
            if (g.dim == 2) {
                yl = grad.sy.data() + std::size_t(g.yface(i, j)) * nt;
                yr = grad.sy.data() + std::size_t(g.yface(i, j + 1)) * nt;
                nb = mk.yface_neumann(g, i, j);
                na = mk.yface_neumann(g, i, j + 1);
            }
            const double* tt = grad.st.data() + std::size_t(c) * (nt + 1);
            for (int k = -1; k <= nt; ++k) {
                double q[3] = {0.0, 0.0, 0.0};
                if (k >= 0 && k < nt) {
                    q[0] = 0.5 * ((nl ? 0.0 : xl[k]) + (nr ? 0.0 : xr[k]));
                    if (g.dim == 2) q[1] = 0.5 * ((nb ? 0.0 : yl[k]) + (na ? 0.0 : yr[k]));
                }
                double lo = k >= 0 ? tt[k] : 0.0;
                double hi = k + 1 <= nt ? tt[k + 1] : 0.0;
                double qt = 0.5 * (lo + hi);
                double scale = std::abs(lo) + std::abs(hi);
                if (qt > 0.0 && qt <= 1e-12 * std::max(1.0, scale)) qt = 0.0;
                q[g.dim] = qt;
                double hv = h_f(p.integrand, levels[k + 1], std::span<const double>(q, g.dim + 1));
                if (hv == inf) return inf;
                e += hv;
            }
        }
    e *= g.cell_volume();
    if (mk.has_neumann(g)) {
        ScalarField v0 = reference_field(p);
        const double area = g.dim == 2 ? g.h * g.ht : g.ht;
        auto add = [&](int c) {
            for (int k = 0; k < nt; ++k) {
                std::size_t idx = std::size_t(c) * nt + k;
                e += p.gamma_prime(g.t_center(k)) * (v.values[idx] - v0.values[idx]) * area;
            }
        };
        for (int j = 0; j < g.n[1]; ++j)
            for (int i = 0; i <= g.n[0]; ++i)
                if (mk.xface_neumann(g, i, j)) add(mk.in(g, i, j) ? g.col(i, j) : g.col(i - 1, j));
        if (g.dim == 2)
            for (int j = 0; j <= g.n[1]; ++j)
                for (int i = 0; i < g.n[0]; ++i)
                    if (mk.yface_neumann(g, i, j)) add(mk.in(g, i, j) ? g.col(i, j) : g.col(i, j - 1));
    }
    return e;
}

CoareaResult coarea_check(const ScalarField& v, const ProblemSpec& p, int n_levels) {
    return coarea_check(v, p, n_levels, problem_ghosts(p));
}

CoareaResult coarea_check(const ScalarField& v, const ProblemSpec& p, int n_levels, const BoundaryGhosts& ghosts) {
    if (n_levels < 2) throw Error("coarea_check: n_levels must be >= 2");
    CoareaResult r;
    r.lhs = lifted_energy(v, p, ghosts);
    double sum = 0.0;
    ScalarField ind(p.grid);
    BoundaryGhosts gi = ghosts;
    for (int k = 0; k < n_levels; ++k) {
        double s = (k + 0.5) / n_levels;
        for (std::size_t i = 0; i < v.values.size(); ++i) ind.values[i] = v.values[i] > s ? 1.0 : 0.0;
        for (std::size_t i = 0; i < gi.lateral.size(); ++i) gi.lateral[i] = ghosts.lateral[i] > s ? 1.0 : 0.0;
        gi.bottom = ghosts.bottom > s ? 1.0 : 0.0;
        gi.top = ghosts.top > s ? 1.0 : 0.0;
        sum += lifted_energy(ind, p, gi);
    }
    r.rhs = sum / n_levels;
    r.defect = r.lhs - r.rhs;
    return r;
}

double duality_gap(const ScalarField& v, const FluxField& sigma, const ProblemSpec& p, double s) {
    Profile u = extract_level(v, s, p.grid, p.mask);
    return primal_energy(u, p) - dual_objective(sigma, p);
}

void sample_flux(const FluxField& s, const GridSpec& g, int i, int j, double t, double* sx, double* st) {
    const int nt = g.nt;
    // spatial components live at layer centres t_k
    double pos = std::clamp((t - g.t_min) / g.ht - 0.5, 0.0, double(nt - 1));
    int k0 = std::min(int(pos), nt - 2);
    double w = pos - k0;
    auto lerp = [&](const double* a) { return (1 - w) * a[k0] + w * a[k0 + 1]; };
    const double* xl = s.sx.data() + std::size_t(g.xface(i, j)) * nt;
    const double* xr = s.sx.data() + std::size_t(g.xface(i + 1, j)) * nt;
    sx[0] = 0.5 * (lerp(xl) + lerp(xr));
    if (g.dim == 2) {
        const double* yl = s.sy.data() + std::size_t(g.yface(i, j)) * nt;
        const double* yr = s.sy.data() + std::size_t(g.yface(i, j + 1)) * nt;
        sx[1] = 0.5 * (lerp(yl) + lerp(yr));
    }
    // sigma^t lives on the planes t_kk
    double tp = std::clamp((t - g.t_min) / g.ht, 0.0, double(nt));
    int kk = std::min(int(tp), nt - 1);
    double wt = tp - kk;
    const double* col = s.st.data() + std::size_t(g.col(i, j)) * (nt + 1);
    *st = (1 - wt) * col[kk] + wt * col[kk + 1];
}

CalibrationResiduals calibration_residuals(const Profile& u, const FluxField& sigma, const ProblemSpec& p,
                                           const std::function<bool(double, double)>& region) {
    const auto& g = p.grid;
    const auto& mk = p.mask;
    const auto& f = p.integrand;
    const double theta = positivity_threshold(g);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CalibrationResiduals r;
    r.r1.assign(g.ncols(), nan);
    r.r2.assign(g.ncols(), nan);
    r.r3.assign(g.ncols(), nan);
    const double area = g.column_area();
    auto acc = [&](ResidualNorms& n, double val) {
        n.l1 += val * area;
        n.linf = std::max(n.linf, val);
        ++n.count;
    };
    // plateau sizes per discontinuity level
    std::vector<int> plateau(f.disc_set.size(), 0);
    for (int c = 0; c < g.ncols(); ++c)
        if (mk.inside[c])
            for (std::size_t d = 0; d < f.disc_set.size(); ++d)
                if (std::abs(u.u[c] - f.disc_set[d]) <= theta) ++plateau[d];
    for (int j = 0; j < g.n[1]; ++j)
        for (int i = 0; i < g.n[0]; ++i) {
            int c = g.col(i, j);
            if (!mk.inside[c]) continue;
            double yc = g.dim == 2 ? g.y_center(j) : 0.0;
            if (region && !region(g.x_center(i), yc)) continue;
            double uc = u.u[c];
            bool on_level = false;
            for (std::size_t d = 0; d < f.disc_set.size(); ++d) {
                if (std::abs(uc - f.disc_set[d]) > theta || plateau[d] <= 4) continue;
                double sx[2] = {0, 0}, st = 0;
                double dl = f.disc_set[d];
                sample_flux(sigma, g, i, j, dl, sx, &st);
                double zero[2] = {0, 0};
                double val = std::abs(st + f.eval(dl, std::span<const double>(zero, g.dim)));
                r.r3[c] = val;
                acc(r.n3, val);
                on_level = true;
            }
            bool positive = true;
            for (double d : f.disc_set)
                if (uc <= d + theta) positive = false;
            if (on_level || !positive) continue;
            double sx[2] = {0, 0}, st = 0;
            sample_flux(sigma, g, i, j, uc, sx, &st);
            auto grad = profile_gradient(u, p, i, j);
            double dz[2] = {0, 0};
            f.grad_z(uc, std::span<const double>(grad.data(), g.dim), std::span<double>(dz, g.dim));
            double e1 = 0.0;
            for (int a = 0; a < g.dim; ++a) e1 += (sx[a] - dz[a]) * (sx[a] - dz[a]);
            e1 = std::sqrt(e1);
            double e2 = std::abs(st - f.conj_z(uc, std::span<const double>(sx, g.dim)));
            r.r1[c] = e1;
            r.r2[c] = e2;
            acc(r.n1, e1);
            acc(r.n2, e2);
        }
    return r;
}

double mid_measure(const ScalarField& v, const GridSpec& g, const DomainMask& mask, double lo, double hi) {
    std::size_t mid = 0, total = 0;
    for (int c = 0; c < g.ncols(); ++c) {
        if (!mask.inside[c]) continue;
        const double* col = v.values.data() + std::size_t(c) * g.nt;
        for (int k = 0; k < g.nt; ++k) {
            ++total;
            if (col[k] > lo && col[k] < hi) ++mid;
        }
    }
    return total ? double(mid) / total : 0.0;
}

std::vector<int> histogram(const ScalarField& v, const GridSpec& g, const DomainMask& mask, int bins) {
    std::vector<int> h(bins, 0);
    for (int c = 0; c < g.ncols(); ++c) {
        if (!mask.inside[c]) continue;
        const double* col = v.values.data() + std::size_t(c) * g.nt;
        for (int k = 0; k < g.nt; ++k) {
            int b = int(std::floor(std::clamp(col[k], 0.0, 1.0) * bins));
            ++h[std::min(b, bins - 1)];
        }
    }
    return h;
}

double below_fraction(const Profile& u, const GridSpec& g, double level) {
    int below = 0, total = 0;
    for (int c = 0; c < g.ncols(); ++c) {
        if (!u.defined_on.inside[c]) continue;
        ++total;
        below += u.u[c] < level;
    }
    return total ? double(below) / total : 0.0;
}

}  // namespace liftdual
