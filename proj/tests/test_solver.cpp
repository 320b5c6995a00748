#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "liftdual/analysis.hpp"
#include "liftdual/project.hpp"
#include "liftdual/solver.hpp"

using namespace liftdual;

namespace {

ProblemSpec line_problem(double lam, int nx, int nt, double m = 0.0) {
    return make_problem(alt_caffarelli(lam), make_grid(GridSpec::line(0.0, 2.0, nx, m, 1.0, nt), Rectangle{}));
}

template <class F>
void for_active(const Lifting& lift, FaceVectorField& s, F f) {
    const std::size_t L = lift.xlayers(), Lt = lift.tlevels();
    for (std::size_t p = 0; p < lift.x_active().size(); ++p)
        if (lift.x_active()[p])
            for (std::size_t l = 0; l < L; ++l) f(s.x, p * L + l);
    for (std::size_t p = 0; p < lift.y_active().size(); ++p)
        if (lift.y_active()[p])
            for (std::size_t l = 0; l < L; ++l) f(s.y, p * L + l);
    for (std::size_t p = 0; p < lift.t_active().size(); ++p)
        if (lift.t_active()[p])
            for (std::size_t m = 1; m + 1 < Lt; ++m) f(s.t, p * Lt + m);
}

bool same(const FaceVectorField& a, const FaceVectorField& b, double tol) {
    for (int c = 0; c < 3; ++c) {
        for (std::size_t i = 0; i < a.x[c].size(); ++i)
            if (std::abs(a.x[c][i] - b.x[c][i]) > tol) return false;
        for (std::size_t i = 0; i < a.t[c].size(); ++i)
            if (std::abs(a.t[c][i] - b.t[c][i]) > tol) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("first step from the reference field") {
    // u0 = 1: v0 = 1 everywhere and only the top slab face carries a gradient, (0 - 1)/h_t
    auto p = line_problem(1.0, 2, 2);
    SolverConfig cfg;
    cfg.algorithm = Algorithm::PD;
    Solver solver(p, cfg);
    const double alpha = solver.config().alpha;
    CHECK(alpha == doctest::Approx(1.0 / operator_norm_bound(p.grid)));
    auto s = solver.initial_state();
    for (double x : s.v.values) CHECK(x == 1.0);
    solver.step(s);
    const auto& lift = solver.lifting();
    const int nt = p.grid.nt;
    const std::size_t Lt = lift.tlevels(), L = lift.xlayers();
    for (int i = 0; i < 2; ++i) {
        std::size_t pos = lift.tpos(i, 0);
        CHECK(s.sigma.t[1][pos * Lt + nt + 1] == doctest::Approx(-2 * alpha));
        CHECK(s.sigma.t[0][pos * Lt + nt + 1] == 0.0);
        for (int kk = 0; kk < nt; ++kk) CHECK(s.sigma.t[1][pos * Lt + kk + 1] == 0.0);
    }
    // the interior x-face averages the two top faces of its neighbours, (2 * -2 + 2 * 0) / 4
    std::size_t mid = lift.xpos(1, 0);
    CHECK(s.sigma.x[1][mid * L + nt] == doctest::Approx(-alpha));
    CHECK(s.sigma.x[1][mid * L + nt + 1] == doctest::Approx(-alpha));
    CHECK(s.sigma.x[1][mid * L + 1] == 0.0);
    // v moves by beta * div of the contracted flux, then clamps
    FluxField fl = solver.flux(s.sigma);
    auto div = divergence(p.grid, p.mask, fl);
    auto v0 = reference_field(p);
    for (std::size_t n = 0; n < v0.values.size(); ++n)
        CHECK(s.v.values[n] == doctest::Approx(std::clamp(v0.values[n] + solver.config().beta * div.values[n], 0.0, 1.0)));
    CHECK(s.iter == 1);
}

TEST_CASE("a discrete saddle is a fixed point and a divergence-free flux leaves v alone") {
    // above t = 0 every level has c = -lambda, so sigma = (0, -lambda) is feasible, divergence-free and
    // the only gradient, on the top slab, points into its normal cone
    const double lam = 1.5;
    auto p = line_problem(lam, 8, 8, 0.5);
    for (auto alg : {Algorithm::PD, Algorithm::PROJ}) {
        SolverConfig cfg;
        cfg.algorithm = alg;
        Solver solver(p, cfg);
        auto s = solver.initial_state();
        for_active(solver.lifting(), s.sigma, [&](auto& fam, std::size_t n) { fam[1][n] = -lam; });
        auto before = s;
        auto div = divergence(p.grid, p.mask, solver.flux(s.sigma));
        for (double x : div.values) CHECK(std::abs(x) <= 1e-12);
        solver.step(s);
        CHECK(same(s.sigma, before.sigma, 1e-12));
        for (std::size_t n = 0; n < s.v.values.size(); ++n) {
            CHECK(std::abs(s.v.values[n] - before.v.values[n]) <= 1e-12);
            CHECK(std::abs(s.v_bar.values[n] - before.v_bar.values[n]) <= 1e-12);
        }
    }
}

TEST_CASE("step conditions are enforced") {
    auto p = line_problem(1.0, 16, 8);
    SolverConfig pd;
    pd.algorithm = Algorithm::PD;
    pd.alpha = pd.beta = 1.0;
    CHECK_THROWS_AS(Solver(p, pd), SolverError);
    SolverConfig proj;
    proj.alpha = proj.beta = 2.0;
    CHECK_THROWS_AS(Solver(p, proj), SolverError);
    SolverConfig ok;
    ok.alpha = 0.5;
    CHECK(Solver(p, ok).config().beta == doctest::Approx(2.0));
}

TEST_CASE("NaN data aborts the run") {
    auto p = line_problem(std::nan(""), 16, 8);
    SolverConfig cfg;
    cfg.max_iters = 5;
    CHECK_THROWS_AS(run(p, cfg), Error);
}

TEST_CASE("dual objective and Lagrangian") {
    auto p = line_problem(1.0, 16, 8);
    const auto& g = p.grid;
    FluxField s(g);
    CHECK(dual_objective(s, p) == 0.0);
    CHECK(lagrangian_value(reference_field(p), s, p) == 0.0);
    for (int c = 0; c < g.ncols(); ++c) s.st[std::size_t(c) * (g.nt + 1) + g.nt] = -0.7;
    CHECK(dual_objective(s, p) == doctest::Approx(0.7 * 2.0));
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 5; ++trial) {
        auto r = testing_helpers::random_flux(g, rng);
        CHECK(lagrangian_value(reference_field(p), r, p) == doctest::Approx(dual_objective(r, p)).epsilon(1e-12));
    }
}

TEST_CASE("PD dual objective trends upward") {
    auto p = line_problem(1.0, 128, 64);
    SolverConfig cfg;
    cfg.algorithm = Algorithm::PD;
    cfg.max_iters = 2000;
    cfg.check_every = 100;
    cfg.tol = 0.0;
    auto [st, rep] = run(p, cfg);
    int dips = 0;
    for (std::size_t k = 1; k < rep.dual_history.size(); ++k) dips += rep.dual_history[k] < rep.dual_history[k - 1] - 1e-9;
    INFO("dual history first " << rep.dual_history.front() << " last " << rep.dual_history.back() << " dips " << dips);
    CHECK(rep.dual_history.back() > rep.dual_history.front());
    CHECK(dips <= int(rep.dual_history.size()) / 4);
}

TEST_CASE("PROJ needs fewer iterations than PD") {
    auto p = line_problem(2.0, 128, 64);
    SolverConfig proj;
    proj.max_iters = 20000;
    SolverConfig pd = proj;
    pd.algorithm = Algorithm::PD;
    auto [s1, r1] = run(p, proj);
    auto [s2, r2] = run(p, pd);
    INFO("proj " << r1.iters_used << " pd " << r2.iters_used);
    CHECK(r1.converged);
    CHECK(r1.iters_used < r2.iters_used);
}

TEST_CASE("runs are deterministic") {
    auto p = line_problem(2.0, 64, 32);
    SolverConfig cfg;
    cfg.max_iters = 300;
    auto [s1, r1] = run(p, cfg);
    auto [s2, r2] = run(p, cfg);
    CHECK(s1.v.values == s2.v.values);
    CHECK(r1.dual_history == r2.dual_history);
    CHECK(r1.primal_history == r2.primal_history);
    CHECK(r1.residual_history == r2.residual_history);
    CHECK(r1.iters_used == r2.iters_used);
}

TEST_CASE("converged pair is a saddle point of the Lagrangian") {
    auto p = line_problem(1.0, 64, 32);
    SolverConfig cfg;
    cfg.max_iters = 5000;
    Solver solver(p, cfg);
    auto [st, rep] = solver.run();
    REQUIRE(rep.converged);
    const auto& lift = solver.lifting();
    FluxField fl = solver.flux(st.sigma);
    const double base = lagrangian_value(st.v, fl, p);
    const double tol = 1e-2 * std::abs(base);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> n01;
    for (int trial = 0; trial < 20; ++trial) {
        auto s = st.sigma;
        for_active(lift, s, [&](auto& fam, std::size_t n) {
            for (int c = 0; c < 2; ++c) fam[c][n] += 0.3 * n01(rng);
        });
        apply_K_projection(s, lift, solver.levels());
        apply_slice_constraints(s, lift, p);
        CHECK(lagrangian_value(st.v, solver.flux(s), p) <= base + tol);
    }
    std::uniform_real_distribution<double> u(-0.3, 0.3);
    for (int trial = 0; trial < 20; ++trial) {
        auto v = st.v;
        for (auto& x : v.values) x = std::clamp(x + u(rng), 0.0, 1.0);
        CHECK(base <= lagrangian_value(v, fl, p) + tol);
    }
}

TEST_CASE("lambda = 1 converges to the constant solution value") {
    auto p = line_problem(1.0, 128, 64);
    SolverConfig cfg;
    auto [st, rep] = run(p, cfg);
    CHECK(rep.converged);
    CHECK(rep.dual_history.back() == doctest::Approx(2.0).epsilon(0.02));
    CHECK(rep.observed_gap_constant <= rep.declared_gap_constant);
    for (std::size_t k = 0; k < rep.gap_history.size(); ++k) CHECK(rep.gap_history[k] >= -rep.declared_gap_constant * rep.h);
    CHECK(monotonicity_defect(st.v, p.grid, p.mask) <= 1e-3 * 2.0);
}
