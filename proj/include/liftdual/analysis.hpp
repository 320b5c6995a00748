#pragma once

#include <functional>
#include <vector>

#include "liftdual/grid.hpp"
#include "liftdual/problem.hpp"

namespace liftdual {

struct Profile {
    std::vector<double> u;  // per column; outside columns hold 0
    DomainMask defined_on;
};

// u_s(x) = inf{t : v(x,t) <= s} after monotonizing each column by a running
// maximum from the top, with linear interpolation between cell centres
Profile extract_level(const ScalarField& v, double s, const GridSpec& g, const DomainMask& mask);

double monotonicity_defect(const ScalarField& v, const GridSpec& g, const DomainMask& mask);

// sub-cell values within theta_pos above a discontinuity level count as sitting on it
double positivity_threshold(const GridSpec& g);

double primal_energy(const Profile& u, const ProblemSpec& p);

// forward-difference gradient of u at column (i,j) with Dirichlet ghosts from u0
std::array<double, 2> profile_gradient(const Profile& u, const ProblemSpec& p, int i, int j);

// cell-assembled lifted energy; ghosts default to the problem's boundary data
double lifted_energy(const ScalarField& v, const ProblemSpec& p);
double lifted_energy(const ScalarField& v, const ProblemSpec& p, const BoundaryGhosts& ghosts);

struct CoareaResult {
    double lhs = 0.0;
    double rhs = 0.0;
    double defect = 0.0;
};
CoareaResult coarea_check(const ScalarField& v, const ProblemSpec& p, int n_levels);
CoareaResult coarea_check(const ScalarField& v, const ProblemSpec& p, int n_levels, const BoundaryGhosts& ghosts);

double duality_gap(const ScalarField& v, const FluxField& sigma, const ProblemSpec& p, double s = 0.5);

struct ResidualNorms {
    double l1 = 0.0;
    double linf = 0.0;
    int count = 0;
};
struct CalibrationResiduals {
    std::vector<double> r1, r2, r3;           // per column, NaN where not evaluated
    ResidualNorms n1, n2, n3;
};
// region restricts the evaluated columns (e.g. away from a blow-up); empty = all
CalibrationResiduals calibration_residuals(const Profile& u, const FluxField& sigma, const ProblemSpec& p,
                                           const std::function<bool(double, double)>& region = {});

// share of inside cylinder cells with lo < v < hi
double mid_measure(const ScalarField& v, const GridSpec& g, const DomainMask& mask, double lo = 0.1,
                   double hi = 0.9);
std::vector<int> histogram(const ScalarField& v, const GridSpec& g, const DomainMask& mask, int bins);
// share of inside columns with u < level
double below_fraction(const Profile& u, const GridSpec& g, double level);

// sigma^x (spatial part) and sigma^t at the point (column centre, t), interpolated from faces
void sample_flux(const FluxField& s, const GridSpec& g, int i, int j, double t, double* sx, double* st);

}  // namespace liftdual
