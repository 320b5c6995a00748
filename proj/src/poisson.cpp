#include "liftdual/poisson.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <cmath>
#include <numeric>

namespace liftdual {

namespace {

// 7-point symmetric operator; xm/ym/tm hold the coupling to the minus
// neighbour along each axis (0 when absent).  Cells outside are inert.
struct Level {
    int n0 = 0, n1 = 0, nt = 0;
    std::array<int, 3> factor{1, 1, 1};  // coarsening factor towards the next level
    std::vector<std::uint8_t> inside;    // per cell
    std::vector<double> xm, ym, tm, diag;

    std::size_t size() const { return std::size_t(n0) * n1 * nt; }
    std::size_t idx(int i, int j, int k) const { return (std::size_t(j) * n0 + i) * nt + k; }

    void apply(const double* x, double* y) const {
        const std::size_t sx = nt, sy = std::size_t(n0) * nt;
        for (int j = 0; j < n1; ++j)
            for (int i = 0; i < n0; ++i)
                for (int k = 0; k < nt; ++k) {
                    std::size_t p = idx(i, j, k);
                    if (!inside[p]) {
                        y[p] = 0.0;
                        continue;
                    }
                    double s = diag[p] * x[p];
                    if (i > 0) s -= xm[p] * x[p - sx];
                    if (i + 1 < n0) s -= xm[p + sx] * x[p + sx];
                    if (j > 0) s -= ym[p] * x[p - sy];
                    if (j + 1 < n1) s -= ym[p + sy] * x[p + sy];
                    if (k > 0) s -= tm[p] * x[p - 1];
                    if (k + 1 < nt) s -= tm[p + 1] * x[p + 1];
                    y[p] = s;
                }
    }

    void gs_color(const double* b, double* x, int color) const {
        const std::size_t sx = nt, sy = std::size_t(n0) * nt;
        for (int j = 0; j < n1; ++j)
            for (int i = 0; i < n0; ++i) {
                int k0 = (i + j + color) & 1;
                for (int k = k0; k < nt; k += 2) {
                    std::size_t p = idx(i, j, k);
                    if (!inside[p]) continue;
                    double s = b[p];
                    if (i > 0) s += xm[p] * x[p - sx];
                    if (i + 1 < n0) s += xm[p + sx] * x[p + sx];
                    if (j > 0) s += ym[p] * x[p - sy];
                    if (j + 1 < n1) s += ym[p + sy] * x[p + sy];
                    if (k > 0) s += tm[p] * x[p - 1];
                    if (k + 1 < nt) s += tm[p + 1] * x[p + 1];
                    x[p] = s / diag[p];
                }
            }
    }
};

Level fine_level(const GridSpec& g, const DomainMask& mask, SlabCondition slabs) {
    Level L;
    L.n0 = g.n[0];
    L.n1 = g.n[1];
    L.nt = g.nt;
    const std::size_t n = L.size();
    L.inside.assign(n, 0);
    L.xm.assign(n, 0.0);
    L.ym.assign(n, 0.0);
    L.tm.assign(n, 0.0);
    L.diag.assign(n, 0.0);
    const double cx = 1.0 / (g.h * g.h), ct = 1.0 / (g.ht * g.ht);
    for (int j = 0; j < L.n1; ++j)
        for (int i = 0; i < L.n0; ++i) {
            if (!mask.in(g, i, j)) continue;
            // lateral faces: coupling, Dirichlet ghost, or nothing for Neumann
            double xlo = 0.0, xhi = 0.0, ylo = 0.0, yhi = 0.0, dlat = 0.0;
            auto lateral = [&](bool nb_in, bool neumann, double& coupling) {
                if (nb_in) {
                    coupling = cx;
                    dlat += cx;
                } else if (!neumann) {
                    dlat += cx;
                }
            };
            lateral(mask.in(g, i - 1, j), mask.xface_neumann(g, i, j), xlo);
            lateral(mask.in(g, i + 1, j), mask.xface_neumann(g, i + 1, j), xhi);
            if (g.dim == 2) {
                lateral(mask.in(g, i, j - 1), mask.yface_neumann(g, i, j), ylo);
                lateral(mask.in(g, i, j + 1), mask.yface_neumann(g, i, j + 1), yhi);
            }
            for (int k = 0; k < L.nt; ++k) {
                std::size_t p = L.idx(i, j, k);
                L.inside[p] = 1;
                L.xm[p] = xlo;
                L.ym[p] = ylo;
                double d = dlat;
                if (k > 0) {
                    L.tm[p] = ct;
                    d += ct;
                } else if (slabs == SlabCondition::Dirichlet) {
                    d += ct;
                }
                if (k + 1 < L.nt || slabs == SlabCondition::Dirichlet) d += ct;
                L.diag[p] = d;
            }
        }
    return L;
}

bool coarsenable(const Level& L) {
    return L.size() > 512 && (L.n0 >= 4 || L.n1 >= 4 || L.nt >= 4);
}

// Galerkin coarse operator R A P with piecewise-constant P and R = P^T / F
Level coarsen(Level& f) {
    f.factor = {f.n0 >= 4 ? 2 : 1, f.n1 >= 4 ? 2 : 1, f.nt >= 4 ? 2 : 1};
    Level c;
    c.n0 = (f.n0 + f.factor[0] - 1) / f.factor[0];
    c.n1 = (f.n1 + f.factor[1] - 1) / f.factor[1];
    c.nt = (f.nt + f.factor[2] - 1) / f.factor[2];
    const std::size_t n = c.size();
    c.inside.assign(n, 0);
    c.xm.assign(n, 0.0);
    c.ym.assign(n, 0.0);
    c.tm.assign(n, 0.0);
    c.diag.assign(n, 0.0);
    const double F = f.factor[0] * f.factor[1] * f.factor[2];
    for (int j = 0; j < f.n1; ++j)
        for (int i = 0; i < f.n0; ++i)
            for (int k = 0; k < f.nt; ++k) {
                std::size_t p = f.idx(i, j, k);
                if (!f.inside[p]) continue;
                int I = i / f.factor[0], J = j / f.factor[1], K = k / f.factor[2];
                std::size_t q = c.idx(I, J, K);
                c.inside[q] = 1;
                c.diag[q] += f.diag[p] / F;
                if (i > 0 && f.xm[p] != 0.0) {
                    if ((i - 1) / f.factor[0] == I) c.diag[q] -= 2 * f.xm[p] / F;
                    else c.xm[q] += f.xm[p] / F;
                }
                if (j > 0 && f.ym[p] != 0.0) {
                    if ((j - 1) / f.factor[1] == J) c.diag[q] -= 2 * f.ym[p] / F;
                    else c.ym[q] += f.ym[p] / F;
                }
                if (k > 0 && f.tm[p] != 0.0) {
                    if ((k - 1) / f.factor[2] == K) c.diag[q] -= 2 * f.tm[p] / F;
                    else c.tm[q] += f.tm[p] / F;
                }
            }
    return c;
}

}  // namespace

struct LaplaceSolver::Impl {
    std::vector<Level> levels;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> coarse;
    std::vector<std::ptrdiff_t> coarse_index;  // cell -> unknown, -1 outside
    int coarse_n = 0;
    std::size_t ncells_inside = 0;
    mutable std::vector<std::vector<double>> r, bc, xc;

    void factor_coarsest() {
        const Level& L = levels.back();
        coarse_index.assign(L.size(), -1);
        coarse_n = 0;
        for (std::size_t p = 0; p < L.size(); ++p)
            if (L.inside[p]) coarse_index[p] = coarse_n++;
        std::vector<Eigen::Triplet<double>> trip;
        const std::size_t sx = L.nt, sy = std::size_t(L.n0) * L.nt;
        for (int j = 0; j < L.n1; ++j)
            for (int i = 0; i < L.n0; ++i)
                for (int k = 0; k < L.nt; ++k) {
                    std::size_t p = L.idx(i, j, k);
                    if (!L.inside[p]) continue;
                    auto a = coarse_index[p];
                    trip.emplace_back(a, a, L.diag[p]);
                    auto link = [&](std::size_t qn, double w) {
                        if (w == 0.0 || !L.inside[qn]) return;
                        trip.emplace_back(a, coarse_index[qn], -w);
                        trip.emplace_back(coarse_index[qn], a, -w);
                    };
                    if (i > 0) link(p - sx, L.xm[p]);
                    if (j > 0) link(p - sy, L.ym[p]);
                    if (k > 0) link(p - 1, L.tm[p]);
                }
        Eigen::SparseMatrix<double> A(coarse_n, coarse_n);
        A.setFromTriplets(trip.begin(), trip.end());
        coarse.compute(A);
        if (coarse.info() != Eigen::Success) throw PoissonError("coarse factorization failed", 0.0);
    }

    void cycle(int l, const double* b, double* x) const {
        const Level& L = levels[l];
        const std::size_t n = L.size();
        if (l + 1 == int(levels.size())) {
            Eigen::VectorXd rhs(coarse_n);
            for (std::size_t p = 0; p < n; ++p)
                if (coarse_index[p] >= 0) rhs[coarse_index[p]] = b[p];
            Eigen::VectorXd sol = coarse.solve(rhs);
            for (std::size_t p = 0; p < n; ++p) x[p] = coarse_index[p] >= 0 ? sol[coarse_index[p]] : 0.0;
            return;
        }
        std::fill(x, x + n, 0.0);
        for (int s = 0; s < 2; ++s) {
            L.gs_color(b, x, 0);
            L.gs_color(b, x, 1);
        }
        std::vector<double>& res = r[l];
        L.apply(x, res.data());
        for (std::size_t p = 0; p < n; ++p) res[p] = b[p] - res[p];
        const Level& C = levels[l + 1];
        std::vector<double>& b2 = bc[l + 1];
        std::vector<double>& x2 = xc[l + 1];
        std::fill(b2.begin(), b2.end(), 0.0);
        const double F = L.factor[0] * L.factor[1] * L.factor[2];
        for (int j = 0; j < L.n1; ++j)
            for (int i = 0; i < L.n0; ++i)
                for (int k = 0; k < L.nt; ++k) {
                    std::size_t p = L.idx(i, j, k);
                    if (L.inside[p]) b2[C.idx(i / L.factor[0], j / L.factor[1], k / L.factor[2])] += res[p] / F;
                }
        cycle(l + 1, b2.data(), x2.data());
        for (int j = 0; j < L.n1; ++j)
            for (int i = 0; i < L.n0; ++i)
                for (int k = 0; k < L.nt; ++k) {
                    std::size_t p = L.idx(i, j, k);
                    if (L.inside[p]) x[p] += x2[C.idx(i / L.factor[0], j / L.factor[1], k / L.factor[2])];
                }
        for (int s = 0; s < 2; ++s) {
            L.gs_color(b, x, 1);
            L.gs_color(b, x, 0);
        }
    }
};

LaplaceSolver::LaplaceSolver(const GridSpec& g, const DomainMask& mask, SlabCondition slabs)
    : impl_(std::make_unique<Impl>()) {
    auto& lv = impl_->levels;
    lv.push_back(fine_level(g, mask, slabs));
    while (coarsenable(lv.back())) {
        Level c = coarsen(lv.back());
        lv.push_back(std::move(c));
    }
    impl_->factor_coarsest();
    for (const auto& L : lv) {
        impl_->r.emplace_back(L.size(), 0.0);
        impl_->bc.emplace_back(L.size(), 0.0);
        impl_->xc.emplace_back(L.size(), 0.0);
    }
    impl_->ncells_inside = std::accumulate(lv[0].inside.begin(), lv[0].inside.end(), std::size_t(0));
}

LaplaceSolver::~LaplaceSolver() = default;
LaplaceSolver::LaplaceSolver(LaplaceSolver&&) noexcept = default;
LaplaceSolver& LaplaceSolver::operator=(LaplaceSolver&&) noexcept = default;

int LaplaceSolver::levels() const { return int(impl_->levels.size()); }

int LaplaceSolver::iteration_cap() const {
    return std::max(20, int(10 * std::sqrt(double(impl_->levels[0].size()))));
}

void LaplaceSolver::apply(const std::vector<double>& x, std::vector<double>& y) const {
    y.resize(x.size());
    impl_->levels[0].apply(x.data(), y.data());
}

void LaplaceSolver::vcycle(const std::vector<double>& b, std::vector<double>& x) const {
    x.resize(b.size());
    impl_->cycle(0, b.data(), x.data());
}

int LaplaceSolver::solve(const std::vector<double>& b, std::vector<double>& x, double rtol) const {
    const std::size_t n = b.size();
    x.resize(n, 0.0);
    const auto& in = impl_->levels[0].inside;
    std::vector<double> r(n), z(n), p(n), q(n);
    apply(x, q);
    double bnorm = 0.0, rnorm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        r[i] = in[i] ? b[i] - q[i] : 0.0;
        bnorm += in[i] ? b[i] * b[i] : 0.0;
        rnorm += r[i] * r[i];
    }
    bnorm = std::sqrt(bnorm);
    double target = bnorm > 0 ? rtol * bnorm : rtol;
    if (std::sqrt(rnorm) <= target) return 0;
    vcycle(r, z);
    p = z;
    double rz = std::inner_product(r.begin(), r.end(), z.begin(), 0.0);
    const int cap = iteration_cap();
    for (int it = 1; it <= cap; ++it) {
        apply(p, q);
        double alpha = rz / std::inner_product(p.begin(), p.end(), q.begin(), 0.0);
        rnorm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * q[i];
            rnorm += r[i] * r[i];
        }
        if (!std::isfinite(rnorm)) throw PoissonError("poisson: non-finite residual", rnorm);
        if (std::sqrt(rnorm) <= target) return it;
        vcycle(r, z);
        double rz2 = std::inner_product(r.begin(), r.end(), z.begin(), 0.0);
        double beta = rz2 / rz;
        rz = rz2;
        for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    double rel = std::sqrt(rnorm) / (bnorm > 0 ? bnorm : 1.0);
    throw PoissonError("poisson: no convergence within " + std::to_string(cap) + " iterations, residual " +
                           std::to_string(rel),
                       rel);
}

ScalarField solve_dn_laplacian(const ScalarField& rhs, const GridSpec& g, const DomainMask& mask,
                               SlabCondition slabs) {
    check_shape(g, rhs);
    for (double v : rhs.values)
        if (!std::isfinite(v)) throw PoissonError("poisson: non-finite right-hand side", 0.0);
    LaplaceSolver solver(g, mask, slabs);
    // Laplacian w = rhs  <=>  A w = -rhs
    std::vector<double> b(rhs.values.size());
    for (std::size_t i = 0; i < b.size(); ++i) b[i] = -rhs.values[i];
    ScalarField w(g);
    solver.solve(b, w.values, 1e-10);
    return w;
}

ScalarField apply_laplacian(const ScalarField& w, const GridSpec& g, const DomainMask& mask, SlabCondition slabs) {
    check_shape(g, w);
    LaplaceSolver solver(g, mask, slabs);
    ScalarField out(g);
    solver.apply(w.values, out.values);
    for (double& v : out.values) v = -v;
    return out;
}

}  // namespace liftdual
