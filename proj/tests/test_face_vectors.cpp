#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "liftdual/face_vectors.hpp"

using namespace liftdual;

namespace {

FaceVectorField random_vectors(const Lifting& lift, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto s = lift.zeros();
    const std::size_t L = lift.xlayers(), Lt = lift.tlevels();
    const auto& g = lift.grid();
    for (int a = 0; a < lift.components(); ++a) {
        for (std::size_t p = 0; p < lift.x_active().size(); ++p)
            if (lift.x_active()[p])
                for (std::size_t l = 0; l < L; ++l) s.x[a][p * L + l] = u(rng);
        if (g.dim == 2)
            for (std::size_t p = 0; p < lift.y_active().size(); ++p)
                if (lift.y_active()[p])
                    for (std::size_t l = 0; l < L; ++l) s.y[a][p * L + l] = u(rng);
        for (std::size_t p = 0; p < lift.t_active().size(); ++p)
            if (lift.t_active()[p])
                for (std::size_t m = 1; m + 1 < Lt; ++m) s.t[a][p * Lt + m] = u(rng);
    }
    return s;
}

FluxField random_gradient(const Domain& d, std::mt19937_64& rng) {
    auto v = testing_helpers::random_scalar(d.grid, d.mask, rng);
    auto ghosts = BoundaryGhosts::subgraph(d.grid, [](double x, double) { return 0.5 + 0.25 * std::sin(3 * x); });
    return gradient(d.grid, d.mask, v, ghosts);
}

std::vector<Domain> domains() {
    std::vector<Domain> ds{
        make_grid(GridSpec::line(0.0, 2.0, 8, 0.0, 1.0, 5), Rectangle{}),
        make_grid(GridSpec::box({0.0, 0.0}, 0.25, {4, 5}, 0.0, 1.0, 3), Rectangle{}),
        make_grid(GridSpec::box({-1.0, -1.0}, 0.125, {16, 16}, 0.0, 1.0, 4), Disc{{0.0, 0.0}, 1.0}),
    };
    auto n = ds[1];
    n.mask.set_neumann(n.grid, [](double, double y) { return y > 1.2; });
    ds.push_back(n);
    return ds;
}

}  // namespace

TEST_CASE("contract is the weighted adjoint of expand") {
    std::mt19937_64 rng(3);
    for (const auto& d : domains()) {
        Lifting lift(d.grid, d.mask);
        for (int trial = 0; trial < 5; ++trial) {
            auto gr = random_gradient(d, rng);
            auto s = random_vectors(lift, rng);
            auto q = lift.zeros();
            lift.expand(gr, q);
            FluxField c(d.grid);
            lift.contract(s, c);
            double a = lift.inner(q, s), b = inner_faces(d.grid, d.mask, gr, c);
            CHECK(std::abs(a - b) <= 1e-12 * (std::abs(a) + std::abs(b)));
        }
    }
}

TEST_CASE("expand keeps the own component and does not increase the weighted norm") {
    std::mt19937_64 rng(5);
    for (const auto& d : domains()) {
        Lifting lift(d.grid, d.mask);
        auto gr = random_gradient(d, rng);
        auto q = lift.zeros();
        lift.expand(gr, q);
        const auto& g = d.grid;
        for (int j = 0; j < g.n[1]; ++j)
            for (int i = 0; i <= g.n[0]; ++i) {
                std::size_t p = lift.xpos(i, j);
                if (!lift.x_active()[p]) continue;
                for (int k = 0; k < g.nt; ++k)
                    CHECK(q.x[0][p * lift.xlayers() + k + 1] == gr.sx[std::size_t(g.xface(i, j)) * g.nt + k]);
            }
        CHECK(lift.inner(q, q) <= inner_faces(g, d.mask, gr, gr) * (1.0 + 1e-12));
    }
}
