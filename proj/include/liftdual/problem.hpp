#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "liftdual/grid.hpp"

namespace liftdual {

// K(t) = {q : q^t >= a |q^x|^2 + c}
struct Paraboloid {
    double a = 0.5;
    double c = 0.0;
};

struct GrowthBound {
    double alpha = 0.5;
    double p = 2.0;
    double r_bound = 0.0;
};

struct Integrand {
    std::string name;
    std::function<double(double, std::span<const double>)> eval;
    std::function<double(double, std::span<const double>)> conj_z;
    // empty for integrands that are not quadratic in z
    std::function<Paraboloid(double)> parab;
    std::vector<double> disc_set;
    std::function<double(double)> neg_f0;
    GrowthBound growth;
    // d/dz f(t, z), used by the convex calibration and the residuals
    std::function<void(double, std::span<const double>, std::span<double>)> grad_z;
    bool convex = false;
    double lambda = 0.0;

    bool parametric() const { return static_cast<bool>(parab); }
};

Integrand alt_caffarelli(double lambda);
Integrand quadratic_convex();
Integrand two_well(double eps, std::function<double(double)> W, double lambda);

struct ProblemSpec {
    Integrand integrand;
    GridSpec grid;
    DomainMask mask;
    std::function<double(double, double)> u0 = [](double, double) { return 1.0; };
    std::function<double(double)> gamma_prime = [](double) { return 0.0; };

    double m() const { return grid.t_min; }
    double M() const { return grid.t_max; }
    double u0_clamped(double x, double y) const;
    // gamma(t) = int_0^t gamma'(s) ds by Gauss-Legendre quadrature
    double gamma(double t) const;
};

ProblemSpec make_problem(Integrand f, const Domain& d);

// +infinity is returned as std::numeric_limits<double>::infinity()
double h_f(const Integrand& f, double t, std::span<const double> q);

std::optional<Paraboloid> constraint_params(const Integrand& f, double t);

BoundaryGhosts problem_ghosts(const ProblemSpec& p);
ScalarField reference_field(const ProblemSpec& p);  // v0 = 1_{t <= u0(x)} on inside cells
std::vector<double> u0_columns(const ProblemSpec& p);  // u0 at inside column centres

// Level at which K is enforced on each face family.  Spatial faces of layer k
// (k = -1..nt, ghost layers included) take the level among t_{k-1/2}, t_k,
// t_{k+1/2} (clamped to [m,M]) with the largest c; horizontal face kk sits at
// t_{kk-1/2}, snapped onto d for the plane nearest each d in D.
struct LevelParams {
    std::vector<Paraboloid> spatial;   // nt + 2 entries, index k + 1
    std::vector<Paraboloid> vertical;  // nt + 1 entries
    std::vector<double> spatial_level;
    std::vector<double> vertical_level;
};
LevelParams level_params(const ProblemSpec& p);
// the spatial-face level rule alone, nt + 2 entries for layers k = -1..nt
std::vector<double> layer_levels(const GridSpec& g, const Integrand& f);

}  // namespace liftdual
