#pragma once

#include <optional>
#include <string>
#include <vector>

#include "liftdual/face_vectors.hpp"
#include "liftdual/poisson.hpp"
#include "liftdual/problem.hpp"

namespace liftdual {

struct SolverError : Error {
    using Error::Error;
};

enum class Algorithm { PD, PROJ };
// PROJ metric: exact Laplacian solve (PCG) or a single symmetric V-cycle,
// which is itself an admissible metric since B^{-1} >= A.
enum class InnerSolve { Exact, VCycle };

struct SolverConfig {
    Algorithm algorithm = Algorithm::PROJ;
    double alpha = 0.0;  // 0 picks the default for the algorithm
    double beta = 0.0;
    int max_iters = 5000;
    double tol = 1e-4;  // bound on the v and sigma residuals over a whole checkpoint window
    int check_every = 50;
    bool overrelax = true;
    InnerSolve inner = InnerSolve::VCycle;
    std::optional<bool> clamp;  // default: on for PD, off for PROJ
    double level = 0.5;         // recovery level for the checkpoints
    double declared_gap_constant = 10.0;

    // fills alpha/beta defaults and checks the step conditions
    SolverConfig resolved(const GridSpec& g) const;
};

struct IterState {
    ScalarField v;
    ScalarField v_bar;
    FaceVectorField sigma;
    int iter = 0;
};

struct RunReport {
    std::vector<int> check_iters;
    std::vector<double> dual_history;       // flux across the graph of u0
    std::vector<double> certified_history;  // inf over v in [0,1] of L(v, sigma)
    std::vector<double> primal_history;     // energy of the recovered u_level
    std::vector<double> gap_history;        // primal - certified dual
    std::vector<double> residual_history;   // at each checkpoint
    std::vector<double> sigma_residual_history;  // ||sigma_k - sigma_{k-w}|| / (w ||sigma_k||), w = check_every
    int iters_used = 0;
    bool converged = false;
    double h = 0.0;
    double declared_gap_constant = 10.0;
    double observed_gap_constant = 0.0;     // max over checkpoints of max(0, -gap) / h
    double observed_flux_gap_constant = 0.0;  // same with the plain flux in place of the certified dual
    double wall_ms = 0.0;
};

class Solver {
public:
    Solver(const ProblemSpec& p, const SolverConfig& cfg);

    IterState initial_state() const;
    void step(IterState& s) const;
    std::pair<IterState, RunReport> run(std::optional<IterState> init = std::nullopt) const;

    // physical staggered flux of the dual variable, Neumann trace imposed
    FluxField flux(const FaceVectorField& sigma) const;

    const ProblemSpec& problem() const { return p_; }
    const SolverConfig& config() const { return cfg_; }
    const Lifting& lifting() const { return lift_; }
    const LevelParams& levels() const { return lp_; }
    double last_residual() const { return residual_; }

private:
    ProblemSpec p_;
    SolverConfig cfg_;
    Lifting lift_;
    LevelParams lp_;
    BoundaryGhosts ghosts_;
    std::optional<LaplaceSolver> laplace_;
    // workspaces
    mutable FluxField grad_, flux_;
    mutable FaceVectorField q_;
    mutable ScalarField div_;
    mutable std::vector<double> w_, rhs_;
    mutable double residual_ = 0.0;
};

IterState step_pd(IterState state, const ProblemSpec& p, const SolverConfig& cfg);
IterState step_proj(IterState state, const ProblemSpec& p, const SolverConfig& cfg);
std::pair<IterState, RunReport> run(const ProblemSpec& p, const SolverConfig& cfg,
                                    std::optional<IterState> init = std::nullopt);

double dual_objective(const FluxField& sigma, const ProblemSpec& p);
double lagrangian_value(const ScalarField& v, const FluxField& sigma, const ProblemSpec& p);
// dual_objective plus the exact minimum over v in [0,1] of the divergence term
double certified_dual(const FluxField& sigma, const ProblemSpec& p);
// the discrete primal of the face-vector scheme: sum_faces W h_f(level, E grad v)
double scheme_energy(const ScalarField& v, const ProblemSpec& p);

std::string to_string(Algorithm a);
Algorithm parse_algorithm(const std::string& s);

}  // namespace liftdual
