#include <chrono>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "liftdual/project.hpp"

using namespace liftdual;

namespace {

std::vector<double> proj(std::vector<double> q, double a, double c) {
    std::vector<double> out(q.size());
    project_epigraph(q, a, c, out);
    return out;
}

double dist(const std::vector<double>& p, const std::vector<double>& q) {
    double s = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) s += (p[k] - q[k]) * (p[k] - q[k]);
    return std::sqrt(s);
}

// nearest point of the 1D paraboloid by grid search over r in [-4, 4], step 1e-5
std::vector<double> brute_force(double qx, double qt, double a, double c) {
    double best = 1e300, br = 0.0;
    for (long n = -400000; n <= 400000; ++n) {
        double r = n * 1e-5, pt = a * r * r + c;
        double d = (r - qx) * (r - qx) + (pt - qt) * (pt - qt);
        if (d < best) {
            best = d;
            br = r;
        }
    }
    return {br, a * br * br + c};
}

}  // namespace

TEST_CASE("epigraph projection examples") {
    auto p = proj({1.0, 5.0}, 0.5, -1.0);
    CHECK(p[0] == 1.0);
    CHECK(p[1] == 5.0);
    p = proj({0.0, -2.0}, 0.5, -1.0);
    CHECK(p[0] == 0.0);
    CHECK(p[1] == -1.0);
    p = proj({2.0, -3.0}, 0.5, -1.0);
    auto b = brute_force(2.0, -3.0, 0.5, -1.0);
    CHECK(dist(p, b) < 1e-4);
}

TEST_CASE("epigraph radius solves the cubic") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-5.0, 5.0), ua(0.05, 3.0), us(0.0, 6.0);
    for (int n = 0; n < 10000; ++n) {
        double a = ua(rng), c = u(rng), qt = u(rng), s = us(rng);
        double r = epigraph_radius(a, c, qt, s);
        double res = 2 * a * a * r * r * r + (1 + 2 * a * (c - qt)) * r - s;
        CHECK(r >= 0.0);
        CHECK(std::abs(res) <= 1e-10 * (1 + s + std::abs(r) * (1 + 2 * a * std::abs(c - qt)) + 2 * a * a * r * r * r));
    }
}

TEST_CASE("projection property suite") {
    auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-4.0, 4.0), ua(0.1, 2.0);
    for (int dim : {2, 3})
        for (int n = 0; n < 10000; ++n) {
            double a = ua(rng), c = u(rng);
            std::vector<double> q(dim), r(dim);
            for (int k = 0; k < dim; ++k) {
                q[k] = u(rng);
                r[k] = u(rng);
            }
            auto p = proj(q, a, c);
            auto pp = proj(p, a, c);
            CHECK(dist(p, pp) <= 1e-10);
            double s2 = 0.0;
            for (int k = 0; k + 1 < dim; ++k) s2 += p[k] * p[k];
            CHECK(p[dim - 1] >= a * s2 + c - 1e-10);
            CHECK(dist(p, proj(r, a, c)) <= dist(q, r) + 1e-10);
            // q - p is a nonpositive multiple of the inward normal (-2a p^x, 1)
            double dt = q[dim - 1] - p[dim - 1];
            CHECK(dt <= 1e-12);
            for (int k = 0; k + 1 < dim; ++k) {
                double cross = (q[k] - p[k]) - dt * (-2 * a * p[k]);
                CHECK(std::abs(cross) <= 1e-8 * (1 + std::abs(q[k]) + std::abs(dt)));
            }
        }
    int checked = 0;
    std::uniform_real_distribution<double> ux(-3.0, 3.0);
    while (checked < 100) {
        double a = ua(rng), c = u(rng), qx = ux(rng), qt = u(rng);
        if (qt >= a * qx * qx + c) continue;
        auto p = proj({qx, qt}, a, c);
        if (std::abs(p[0]) > 3.9) continue;
        CHECK(dist(p, brute_force(qx, qt, a, c)) <= 1e-4);
        ++checked;
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    CHECK(secs <= 5.0);
}

namespace {

Domain line_domain() { return make_grid(GridSpec::line(0.0, 2.0, 8, 0.0, 1.0, 8), Rectangle{}); }

}  // namespace

TEST_CASE("K projection of a deep downward field lands on the vertices") {
    const double lam = 3.0;
    auto d = line_domain();
    auto p = make_problem(alt_caffarelli(lam), d);
    Lifting lift(d.grid, d.mask);
    auto lp = level_params(p);
    auto s = lift.zeros();
    const std::size_t L = lift.xlayers(), Lt = lift.tlevels();
    for (auto& x : s.x[1]) x = -10 * lam;
    for (auto& x : s.t[1]) x = -10 * lam;
    apply_K_projection(s, lift, lp);
    for (std::size_t pos = 0; pos < lift.x_active().size(); ++pos) {
        if (!lift.x_active()[pos]) continue;
        for (std::size_t l = 0; l < L; ++l) {
            CHECK(s.x[0][pos * L + l] == 0.0);
            CHECK(s.x[1][pos * L + l] == doctest::Approx(lp.spatial[l].c));
        }
    }
    for (std::size_t pos = 0; pos < lift.t_active().size(); ++pos) {
        if (!lift.t_active()[pos]) continue;
        for (std::size_t m = 1; m + 1 < Lt; ++m) {
            CHECK(s.t[0][pos * Lt + m] == 0.0);
            CHECK(s.t[1][pos * Lt + m] == doctest::Approx(lp.vertical[m - 1].c));
            if (lp.vertical_level[m - 1] > 0) CHECK(s.t[1][pos * Lt + m] == doctest::Approx(-lam));
        }
    }
}

TEST_CASE("K projection is idempotent and leaves feasible fields alone") {
    auto d = make_grid(GridSpec::box({0.0, 0.0}, 0.25, {4, 4}, 0.0, 1.0, 4), Rectangle{});
    auto p = make_problem(alt_caffarelli(2.0), d);
    Lifting lift(d.grid, d.mask);
    auto lp = level_params(p);
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    auto s = lift.zeros();
    for (auto* fam : {&s.x, &s.y, &s.t})
        for (auto& comp : *fam)
            for (auto& x : comp) x = u(rng);
    apply_K_projection(s, lift, lp);
    CHECK(min_feasibility_slack(s, lift, lp) >= -1e-10);
    auto again = s;
    apply_K_projection(again, lift, lp);
    for (int a = 0; a < 3; ++a)
        for (std::size_t n = 0; n < s.x[a].size(); ++n) CHECK(std::abs(again.x[a][n] - s.x[a][n]) <= 1e-10);
    for (int a = 0; a < 3; ++a)
        for (std::size_t n = 0; n < s.t[a].size(); ++n) CHECK(std::abs(again.t[a][n] - s.t[a][n]) <= 1e-10);
}

TEST_CASE("slice constraints") {
    auto d = line_domain();
    auto p = make_problem(alt_caffarelli(2.0), d);
    const auto& g = d.grid;
    FluxField s(g);
    for (int c = 0; c < g.ncols(); ++c) {
        s.st[std::size_t(c) * (g.nt + 1)] = -0.3;
        s.st[std::size_t(c) * (g.nt + 1) + g.nt] = -5.0;
        s.st[std::size_t(c) * (g.nt + 1) + 3] = -7.0;
    }
    apply_slice_constraints(s, p);
    for (int c = 0; c < g.ncols(); ++c) {
        CHECK(s.st[std::size_t(c) * (g.nt + 1)] == 0.0);
        CHECK(s.st[std::size_t(c) * (g.nt + 1) + g.nt] == doctest::Approx(-2.0));
        CHECK(s.st[std::size_t(c) * (g.nt + 1) + 3] == -7.0);
    }
    auto before = s;
    apply_slice_constraints(s, p);
    CHECK(s.st == before.st);
}

TEST_CASE("primal projection clamps to the unit interval") {
    ScalarField v;
    v.values = {0.0, 0.5, 1.0, 1.7, -0.2};
    project_primal(v);
    CHECK(v.values == std::vector<double>{0.0, 0.5, 1.0, 1.0, 0.0});
}

TEST_CASE("Neumann trace") {
    auto d = make_grid(GridSpec::line(0.0, 1.0, 4, 0.0, 1.0, 4), Rectangle{});
    const auto& g = d.grid;
    FluxField s(g);
    for (auto& x : s.sx) x = 0.7;
    SUBCASE("no Neumann boundary is the identity") {
        auto p = make_problem(alt_caffarelli(1.0), d);
        auto before = s.sx;
        project_neumann_trace(s, p);
        CHECK(s.sx == before);
    }
    d.mask.set_neumann(g, [](double, double) { return true; });
    auto p = make_problem(alt_caffarelli(1.0), d);
    SUBCASE("homogeneous data zeroes the boundary flux") {
        project_neumann_trace(s, p);
        for (int k = 0; k < g.nt; ++k) {
            CHECK(s.sx[std::size_t(g.xface(0, 0)) * g.nt + k] == 0.0);
            CHECK(s.sx[std::size_t(g.xface(4, 0)) * g.nt + k] == 0.0);
            CHECK(s.sx[std::size_t(g.xface(2, 0)) * g.nt + k] == 0.7);
        }
    }
    SUBCASE("unit gamma_prime gives outward flux -1") {
        p.gamma_prime = [](double) { return 1.0; };
        project_neumann_trace(s, p);
        for (int k = 0; k < g.nt; ++k) {
            CHECK(-s.sx[std::size_t(g.xface(0, 0)) * g.nt + k] == doctest::Approx(-1.0));
            CHECK(s.sx[std::size_t(g.xface(4, 0)) * g.nt + k] == doctest::Approx(-1.0));
        }
    }
}
