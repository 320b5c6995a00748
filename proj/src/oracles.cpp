#include "liftdual/oracles.hpp"

#include <algorithm>
#include <cmath>

namespace liftdual {

const char* to_string(Regime r) {
    switch (r) {
        case Regime::Constant: return "constant";
        case Regime::FreeBoundary: return "free_boundary";
        default: return "both";
    }
}

OracleValue oracle_1d_value(double a, double lam) {
    if (!(a > 0) || !(lam > 0)) throw Error("oracle_1d_value: a and lambda must be positive");
    double flat = lam * a, ramps = 2 * std::sqrt(2 * lam);
    double a_star = 2 * std::sqrt(2 / lam);
    Regime r = std::abs(a - a_star) <= 1e-12 * a_star ? Regime::Both : (a < a_star ? Regime::Constant : Regime::FreeBoundary);
    return {std::min(flat, ramps), r};
}

Profile oracle_1d_solution(double a, double lam, Regime which, const GridSpec& g, const DomainMask& mask) {
    Profile p{std::vector<double>(g.ncols(), 0.0), mask};
    if (which == Regime::FreeBoundary && a < 2 * std::sqrt(2 / lam) * (1 - 1e-12))
        throw Error("free-boundary profile needs a >= 2 sqrt(2/lambda)");
    const double slope = std::sqrt(2 * lam);
    for (int i = 0; i < g.n[0]; ++i) {
        if (!mask.inside[g.col(i, 0)]) continue;
        double x = g.x_center(i) - g.origin[0];
        p.u[g.col(i, 0)] = which == Regime::FreeBoundary ? std::max(0.0, 1 - slope * std::min(x, a - x)) : 1.0;
    }
    return p;
}

double value_function(double lam, double x, double t) {
    return std::min(0.5 * (t - 1) * (t - 1) / x + lam * x, std::sqrt(2 * lam) * (1 + std::abs(t)));
}

std::array<double, 2> value_function_wall_sigma(double lam, double x, double t) {
    const double r = std::sqrt(2 * lam);
    bool parabolic = t > 0 ? x <= (1 + std::sqrt(t)) * (1 + std::sqrt(t)) / r : x <= (1 + std::abs(t)) / r;
    if (parabolic) return {(t - 1) / x, 0.5 * (t - 1) * (t - 1) / (x * x) - lam};
    return {t > 0 ? r : -r, 0.0};
}

std::array<double, 2> value_function_sigma(double lam, double a, double x, double t) {
    // average with the mirror image under x -> a - x, which flips the x component
    auto l = value_function_wall_sigma(lam, x, t);
    auto m = value_function_wall_sigma(lam, a - x, t);
    return {0.5 * (l[0] - m[0]), 0.5 * (l[1] + m[1])};
}

FluxField value_function_field(double lam, double a, const GridSpec& g, const DomainMask& mask) {
    if (g.dim != 1) throw Error("value_function_field is one-dimensional");
    FluxField s(g);
    const double margin = 2 * g.h * (1 + 1e-9);
    auto inside = [&](double x) { return x > margin && x < a - margin; };
    for (int i = 0; i <= g.n[0]; ++i) {
        double x = i * g.h;
        if (!mask.xface_active(g, i, 0) || !inside(x)) continue;
        for (int k = 0; k < g.nt; ++k) s.sx[std::size_t(g.xface(i, 0)) * g.nt + k] = value_function_sigma(lam, a, x, g.t_center(k))[0];
    }
    for (int i = 0; i < g.n[0]; ++i) {
        double x = g.x_center(i) - g.origin[0];
        if (!mask.inside[g.col(i, 0)] || !inside(x)) continue;
        for (int kk = 0; kk <= g.nt; ++kk) {
            // the t = 0 plane is read from above
            double t = std::max(g.t_face(kk), 1e-14);
            s.st[std::size_t(g.col(i, 0)) * (g.nt + 1) + kk] = value_function_sigma(lam, a, x, t)[1];
        }
    }
    return s;
}

FaceVectorField value_function_vectors(double lam, double a, const Lifting& lift) {
    const auto& g = lift.grid();
    if (g.dim != 1) throw Error("value_function_vectors is one-dimensional");
    FaceVectorField f = lift.zeros();
    const double margin = 2 * g.h * (1 + 1e-9);
    for (int i = 0; i <= g.n[0]; ++i) {
        std::size_t p = lift.xpos(i, 0);
        double x = i * g.h;
        if (!lift.x_active()[p] || x <= margin || x >= a - margin) continue;
        for (int k = -1; k <= g.nt; ++k) {
            double t = std::clamp(g.t_center(k), g.t_min, g.t_max);
            auto s = value_function_sigma(lam, a, x, std::max(t, 1e-14));
            f.x[0][p * lift.xlayers() + k + 1] = s[0];
            f.x[1][p * lift.xlayers() + k + 1] = s[1];
        }
    }
    for (int i = 0; i < g.n[0]; ++i) {
        std::size_t p = lift.tpos(i, 0);
        double x = g.x_center(i) - g.origin[0];
        if (!lift.t_active()[p] || x <= margin || x >= a - margin) continue;
        for (int kk = 0; kk <= g.nt; ++kk) {
            auto s = value_function_sigma(lam, a, x, std::max(g.t_face(kk), 1e-14));
            f.t[0][p * lift.tlevels() + kk + 1] = s[0];
            f.t[1][p * lift.tlevels() + kk + 1] = s[1];
        }
    }
    return f;
}

double critical_lambda_disc(double R) {
    if (!(R > 0)) throw Error("critical_lambda_disc: R must be positive");
    return 2 * std::exp(1.0) / (R * R);
}

QuadraticSolution quadratic_1d_solution(double a, const GridSpec& g, const DomainMask& mask) {
    if (!(a > 0)) throw Error("quadratic_1d_solution: a must be positive");
    QuadraticSolution s{{std::vector<double>(g.ncols(), 0.0), mask}, std::tanh(0.5 * a)};
    for (int i = 0; i < g.n[0]; ++i) {
        double x = g.x_center(i) - g.origin[0];
        s.u.u[g.col(i, 0)] = std::cosh(x - 0.5 * a) / std::cosh(0.5 * a);
    }
    return s;
}

QuadraticSolution quadratic_1d_discrete(const GridSpec& g, const DomainMask& mask) {
    if (g.dim != 1) throw Error("quadratic_1d_discrete: one-dimensional grids only");
    // (2u_i - u_{i-1} - u_{i+1}) / h^2 + u_i = 0 with ghosts u_{-1} = u_n = 1, by the Thomas algorithm
    const int n = g.n[0];
    const double h2 = g.h * g.h, diag = 2.0 / h2 + 1.0, off = -1.0 / h2;
    std::vector<double> cp(n), dp(n), u(n);
    for (int i = 0; i < n; ++i) {
        double rhs = (i == 0 || i == n - 1 ? 1.0 / h2 : 0.0) + (n == 1 ? 1.0 / h2 : 0.0);
        double den = diag - (i > 0 ? off * cp[i - 1] : 0.0);
        cp[i] = off / den;
        dp[i] = (rhs - (i > 0 ? off * dp[i - 1] : 0.0)) / den;
    }
    for (int i = n - 1; i >= 0; --i) u[i] = dp[i] - (i + 1 < n ? cp[i] * u[i + 1] : 0.0);
    QuadraticSolution s{{std::vector<double>(g.ncols(), 0.0), mask}, 0.0};
    double e = 0.0;
    for (int i = 0; i <= n; ++i) {
        double lo = i > 0 ? u[i - 1] : 1.0, hi = i < n ? u[i] : 1.0, z = (hi - lo) / g.h;
        e += 0.5 * z * z;
    }
    for (int i = 0; i < n; ++i) {
        e += 0.5 * u[i] * u[i];
        s.u.u[g.col(i, 0)] = u[i];
    }
    s.value = e * g.h;
    return s;
}

FluxField build_convex_calibration(const Profile& u_bar, const ProblemSpec& p) {
    const auto& f = p.integrand;
    if (!f.convex || !f.grad_z) throw Error("build_convex_calibration needs a convex differentiable integrand");
    const auto& g = p.grid;
    const auto& mk = p.mask;
    const int nt = g.nt;
    FluxField s(g);
    auto value = [&](int i, int j) {
        if (mk.in(g, i, j)) return u_bar.u[g.col(i, j)];
        return p.u0_clamped(g.x_center(i), g.dim == 2 ? g.y_center(j) : 0.0);
    };
    // sigma_bar on faces: d_z f at the face, gradient along the face normal
    std::vector<double> bx(g.n_xfaces(), 0.0), by(g.n_yfaces(), 0.0);
    auto face_flux = [&](double ua, double ub) {
        double z = (ub - ua) / g.h, out = 0.0;
        f.grad_z(0.5 * (ua + ub), std::span<const double>(&z, 1), std::span<double>(&out, 1));
        return out;
    };
    for (int j = 0; j < g.n[1]; ++j)
        for (int i = 0; i <= g.n[0]; ++i)
            if (mk.xface_active(g, i, j) && !mk.xface_neumann(g, i, j))
                bx[g.xface(i, j)] = face_flux(value(i - 1, j), value(i, j));
    if (g.dim == 2)
        for (int j = 0; j <= g.n[1]; ++j)
            for (int i = 0; i < g.n[0]; ++i)
                if (mk.yface_active(g, i, j) && !mk.yface_neumann(g, i, j))
                    by[g.yface(i, j)] = face_flux(value(i, j - 1), value(i, j));
    for (int j = 0; j < g.n[1]; ++j)
        for (int i = 0; i <= g.n[0]; ++i)
            for (int k = 0; k < nt; ++k) s.sx[std::size_t(g.xface(i, j)) * nt + k] = bx[g.xface(i, j)];
    if (g.dim == 2)
        for (int j = 0; j <= g.n[1]; ++j)
            for (int i = 0; i < g.n[0]; ++i)
                for (int k = 0; k < nt; ++k) s.sy[std::size_t(g.yface(i, j)) * nt + k] = by[g.yface(i, j)];
    for (int j = 0; j < g.n[1]; ++j)
        for (int i = 0; i < g.n[0]; ++i) {
            int c = g.col(i, j);
            if (!mk.inside[c]) continue;
            double u = u_bar.u[c];
            double zc[2] = {0.5 * (bx[g.xface(i, j)] + bx[g.xface(i + 1, j)]), 0.0};
            double div = (bx[g.xface(i + 1, j)] - bx[g.xface(i, j)]) / g.h;
            if (g.dim == 2) {
                zc[1] = 0.5 * (by[g.yface(i, j)] + by[g.yface(i, j + 1)]);
                div += (by[g.yface(i, j + 1)] - by[g.yface(i, j)]) / g.h;
            }
            double fs = f.conj_z(u, std::span<const double>(zc, g.dim));
            for (int kk = 0; kk <= nt; ++kk)
                s.st[std::size_t(c) * (nt + 1) + kk] = fs - div * (g.t_face(kk) - u);
        }
    return s;
}

}  // namespace liftdual
