#pragma once

#include <span>

#include "liftdual/face_vectors.hpp"
#include "liftdual/problem.hpp"

namespace liftdual {

// Projection of q onto {p : p^t >= a|p^x|^2 + c}, written into out (may alias q).
// Last entry of q is the t component.
void project_epigraph(std::span<const double> q, double a, double c, std::span<double> out);

// Solves 2a^2 r^3 + (1 + 2a(c - qt)) r - s = 0 for its nonnegative root.
double epigraph_radius(double a, double c, double qt, double s);

// Face-by-face projection of the dual variable onto K at the face levels.
void apply_K_projection(FaceVectorField& s, const Lifting& lift, const LevelParams& lp);

// sigma^t := max(sigma^t, -f(d,0)) on the horizontal planes at D and {m, M}
void apply_slice_constraints(FluxField& sig, const ProblemSpec& p);
void apply_slice_constraints(FaceVectorField& s, const Lifting& lift, const ProblemSpec& p);

void project_primal(ScalarField& v);

// sigma.nu := -gamma'(t) on Neumann faces
void project_neumann_trace(FluxField& sig, const ProblemSpec& p);

// smallest slack q^t - a|q^x|^2 - c over all active face vectors
double min_feasibility_slack(const FaceVectorField& s, const Lifting& lift, const LevelParams& lp);

}  // namespace liftdual
