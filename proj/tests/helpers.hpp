#pragma once

#include <cmath>
#include <random>

#include "liftdual/grid.hpp"

namespace testing_helpers {

inline liftdual::ScalarField random_scalar(const liftdual::GridSpec& g, const liftdual::DomainMask& mask,
                                           std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    liftdual::ScalarField v(g);
    for (int c = 0; c < g.ncols(); ++c)
        if (mask.inside[c])
            for (int k = 0; k < g.nt; ++k) v.values[std::size_t(c) * g.nt + k] = u(rng);
    return v;
}

inline liftdual::FluxField random_flux(const liftdual::GridSpec& g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    liftdual::FluxField s(g);
    for (auto* a : {&s.sx, &s.sy, &s.st})
        for (auto& x : *a) x = u(rng);
    return s;
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

}  // namespace testing_helpers
