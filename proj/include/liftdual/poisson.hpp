#pragma once

#include <memory>
#include <vector>

#include "liftdual/grid.hpp"

namespace liftdual {

struct PoissonError : Error {
    double residual;
    PoissonError(const std::string& what, double r) : Error(what), residual(r) {}
};

// Boundary condition on the horizontal slabs t=m and t=M.  Lateral faces are
// Dirichlet (zero) on Gamma_0 and Neumann on Gamma_1.
enum class SlabCondition { Neumann, Dirichlet };

// Matrix-free A = -Laplacian on the masked cylinder, with a cell-centred
// Galerkin multigrid V-cycle used both as PCG preconditioner and on its own.
class LaplaceSolver {
public:
    LaplaceSolver(const GridSpec& g, const DomainMask& mask, SlabCondition slabs);
    ~LaplaceSolver();
    LaplaceSolver(LaplaceSolver&&) noexcept;
    LaplaceSolver& operator=(LaplaceSolver&&) noexcept;

    void apply(const std::vector<double>& x, std::vector<double>& y) const;
    // one symmetric V-cycle from a zero guess: x = B b with B^{-1} >= A
    void vcycle(const std::vector<double>& b, std::vector<double>& x) const;
    // PCG on A x = b from the given x; returns iterations, throws PoissonError
    int solve(const std::vector<double>& b, std::vector<double>& x, double rtol = 1e-8) const;

    int levels() const;
    int iteration_cap() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// w with Laplacian_h w = rhs (Laplacian_h = div o grad, so the operator is negative definite)
ScalarField solve_dn_laplacian(const ScalarField& rhs, const GridSpec& g, const DomainMask& mask,
                               SlabCondition slabs = SlabCondition::Neumann);

ScalarField apply_laplacian(const ScalarField& w, const GridSpec& g, const DomainMask& mask,
                            SlabCondition slabs = SlabCondition::Neumann);

}  // namespace liftdual
