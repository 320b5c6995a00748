#pragma once

#include <array>

#include "liftdual/analysis.hpp"
#include "liftdual/face_vectors.hpp"
#include "liftdual/problem.hpp"

namespace liftdual {

enum class Regime { Constant, FreeBoundary, Both };
const char* to_string(Regime r);

struct OracleValue {
    double value;
    Regime regime;
};

// I(lambda, a) = min(lambda a, 2 sqrt(2 lambda)) for the 1D Alt-Caffarelli problem on (0,a), u = 1 at both ends
OracleValue oracle_1d_value(double a, double lam);

// u1 = 1, or u2 = max(0, 1 - sqrt(2 lambda) min(x, a - x)), sampled at column centres
Profile oracle_1d_solution(double a, double lam, Regime which, const GridSpec& g, const DomainMask& mask);

// field of the left wall alone, sigma = (d_t V, -d_x V)
std::array<double, 2> value_function_wall_sigma(double lam, double x, double t);
// (sigma^x, sigma^t) of the symmetrized value-function field at (x, t), x in (0, a)
std::array<double, 2> value_function_sigma(double lam, double a, double x, double t);
double value_function(double lam, double x, double t);

// Closed form sampled on the staggered faces; faces within two cells of x = 0 or x = a are zero.
FluxField value_function_field(double lam, double a, const GridSpec& g, const DomainMask& mask);
// Same closed form, full vector at every face centre, for pointwise feasibility checks.
FaceVectorField value_function_vectors(double lam, double a, const Lifting& lift);

double critical_lambda_disc(double R);

struct QuadraticSolution {
    Profile u;
    double value;
};
// minimiser of int 1/2 u'^2 + 1/2 u^2 on (0,a) with u(0) = u(a) = 1
QuadraticSolution quadratic_1d_solution(double a, const GridSpec& g, const DomainMask& mask);

// minimiser of the face-difference discretisation of the same energy, ghosts 1 at both ends;
// it satisfies the discrete Euler-Lagrange equation div sigma_bar = u exactly
QuadraticSolution quadratic_1d_discrete(const GridSpec& g, const DomainMask& mask);
// sigma^x = sigma_bar(x), sigma^t = f*_z(u, sigma_bar) - div(sigma_bar)(t - u), sigma_bar = d_z f(u, grad u)
FluxField build_convex_calibration(const Profile& u_bar, const ProblemSpec& p);

}  // namespace liftdual
