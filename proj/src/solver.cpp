#include "liftdual/solver.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "liftdual/analysis.hpp"
#include "liftdual/project.hpp"

namespace liftdual {

std::string to_string(Algorithm a) { return a == Algorithm::PD ? "pd" : "proj"; }

Algorithm parse_algorithm(const std::string& s) {
    if (s == "pd") return Algorithm::PD;
    if (s == "proj") return Algorithm::PROJ;
    throw Error("unknown algorithm '" + s + "' (expected pd or proj)");
}

SolverConfig SolverConfig::resolved(const GridSpec& g) const {
    SolverConfig c = *this;
    const double L = operator_norm_bound(g);
    if (c.algorithm == Algorithm::PD) {
        if (c.alpha <= 0 && c.beta <= 0) c.alpha = c.beta = 1.0 / L;
        else if (c.alpha <= 0) c.alpha = 1.0 / (c.beta * L * L);
        else if (c.beta <= 0) c.beta = 1.0 / (c.alpha * L * L);
        if (c.alpha * c.beta * L * L > 1.0 + 1e-12) throw SolverError("step sizes violate alpha*beta*L^2 <= 1");
    } else {
        if (c.alpha <= 0 && c.beta <= 0) c.alpha = c.beta = 1.0;
        else if (c.alpha <= 0) c.alpha = 1.0 / c.beta;
        else if (c.beta <= 0) c.beta = 1.0 / c.alpha;
        if (c.alpha * c.beta > 1.0 + 1e-12) throw SolverError("step sizes violate alpha*beta <= 1");
    }
    if (!c.clamp) c.clamp = c.algorithm == Algorithm::PD;
    if (c.max_iters < 0 || c.check_every <= 0) throw SolverError("invalid iteration settings");
    return c;
}

Solver::Solver(const ProblemSpec& p, const SolverConfig& cfg)
    : p_(p), cfg_(cfg.resolved(p.grid)), lift_(p.grid, p.mask), lp_(level_params(p)), ghosts_(problem_ghosts(p)) {
    if (cfg_.algorithm == Algorithm::PROJ) laplace_.emplace(p.grid, p.mask, SlabCondition::Dirichlet);
    grad_ = FluxField(p.grid);
    flux_ = FluxField(p.grid);
    q_ = lift_.zeros();
    div_ = ScalarField(p.grid);
    w_.assign(p.grid.ncells(), 0.0);
    rhs_.assign(p.grid.ncells(), 0.0);
}

IterState Solver::initial_state() const {
    IterState s;
    s.v = reference_field(p_);
    s.v_bar = s.v;
    s.sigma = lift_.zeros();
    apply_slice_constraints(s.sigma, lift_, p_);
    return s;
}

FluxField Solver::flux(const FaceVectorField& sigma) const {
    FluxField out(p_.grid);
    lift_.contract(sigma, out);
    project_neumann_trace(out, p_);
    return out;
}

namespace {

void axpy_all(std::array<std::vector<double>, 3>& y, const std::array<std::vector<double>, 3>& x, double a) {
    for (int c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < y[c].size(); ++i) y[c][i] += a * x[c][i];
}

// ||a - b|| / ||b|| over all face vectors
double sigma_change(const FaceVectorField& ref, const FaceVectorField& cur) {
    double d = 0.0, n = 0.0;
    auto fam = [&](const std::array<std::vector<double>, 3>& r, const std::array<std::vector<double>, 3>& c) {
        for (int k = 0; k < 3; ++k)
            for (std::size_t i = 0; i < r[k].size(); ++i) {
                double e = c[k][i] - r[k][i];
                d += e * e;
                n += c[k][i] * c[k][i];
            }
    };
    fam(ref.x, cur.x);
    fam(ref.y, cur.y);
    fam(ref.t, cur.t);
    return std::sqrt(d) / (std::sqrt(n) + 1e-30);
}

}  // namespace

void Solver::step(IterState& s) const {
    const auto& g = p_.grid;
    gradient_into(g, p_.mask, s.v_bar, ghosts_, grad_);
    lift_.expand(grad_, q_);
    axpy_all(s.sigma.x, q_.x, cfg_.alpha);
    axpy_all(s.sigma.y, q_.y, cfg_.alpha);
    axpy_all(s.sigma.t, q_.t, cfg_.alpha);
    apply_K_projection(s.sigma, lift_, lp_);
    apply_slice_constraints(s.sigma, lift_, p_);

    lift_.contract(s.sigma, flux_);
    project_neumann_trace(flux_, p_);
    divergence_into(g, p_.mask, flux_, div_);

    const std::size_t n = g.ncells();
    const double* upd = div_.values.data();
    if (cfg_.algorithm == Algorithm::PROJ) {
        // v <- v - beta * Laplacian^{-1} div sigma, i.e. v + beta * A^{-1} div sigma with A = -Laplacian
        if (cfg_.inner == InnerSolve::Exact) {
            laplace_->solve(div_.values, w_, 1e-8);
        } else {
            laplace_->vcycle(div_.values, w_);
        }
        upd = w_.data();
    }
    double dn = 0.0, vn = 0.0;
    const bool clamp = *cfg_.clamp;
    double* v = s.v.values.data();
    double* vb = s.v_bar.values.data();
    for (std::size_t i = 0; i < n; ++i) {
        double old = v[i];
        double nv = old + cfg_.beta * upd[i];
        if (clamp) nv = std::min(1.0, std::max(0.0, nv));
        dn += (nv - old) * (nv - old);
        vn += old * old;
        v[i] = nv;
        vb[i] = cfg_.overrelax ? 2 * nv - old : nv;
    }
    residual_ = std::sqrt(dn) / (cfg_.beta * std::sqrt(vn) + 1e-30);
    if (!std::isfinite(residual_)) throw SolverError("NaN detected at iteration " + std::to_string(s.iter + 1));
    ++s.iter;
}

std::pair<IterState, RunReport> Solver::run(std::optional<IterState> init) const {
    auto t0 = std::chrono::steady_clock::now();
    IterState s = init ? std::move(*init) : initial_state();
    s.iter = 0;  // max_iters bounds this run, warm start or not
    RunReport rep;
    rep.h = p_.grid.h;
    rep.declared_gap_constant = cfg_.declared_gap_constant;
    double sigma_res = std::numeric_limits<double>::infinity();
    auto checkpoint = [&]() {
        FluxField fl = flux(s.sigma);
        double dual = dual_objective(fl, p_);
        Profile u = extract_level(s.v, cfg_.level, p_.grid, p_.mask);
        double primal = primal_energy(u, p_);
        // the flux alone is a lower bound only once div sigma = 0; the certified value always is
        double cert = certified_dual(fl, p_);
        double gap = primal - cert;
        rep.check_iters.push_back(s.iter);
        rep.dual_history.push_back(dual);
        rep.certified_history.push_back(cert);
        rep.primal_history.push_back(primal);
        rep.gap_history.push_back(gap);
        rep.residual_history.push_back(residual_);
        rep.sigma_residual_history.push_back(sigma_res);
        rep.observed_gap_constant = std::max(rep.observed_gap_constant, std::max(0.0, -gap) / rep.h);
        rep.observed_flux_gap_constant = std::max(rep.observed_flux_gap_constant, std::max(0.0, dual - primal) / rep.h);
    };
    residual_ = std::numeric_limits<double>::infinity();
    // converged once the residual stays below tol for a whole checkpoint window;
    // single dips happen while v drifts inside a degenerate solution set
    double window = 0.0;
    FaceVectorField sigma_ref = s.sigma;
    while (s.iter < cfg_.max_iters) {
        step(s);
        window = std::max(window, residual_);
        bool at_check = s.iter % cfg_.check_every == 0;
        if (at_check) sigma_res = sigma_change(sigma_ref, s.sigma) / cfg_.check_every;
        if (at_check || s.iter == cfg_.max_iters) checkpoint();
        if (at_check) {
            if (window <= cfg_.tol && sigma_res <= cfg_.tol) {
                rep.converged = true;
                break;
            }
            window = 0.0;
            sigma_ref = s.sigma;
        }
    }
    if (rep.check_iters.empty()) checkpoint();
    rep.iters_used = s.iter;
    rep.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return {std::move(s), std::move(rep)};
}

IterState step_pd(IterState state, const ProblemSpec& p, const SolverConfig& cfg) {
    SolverConfig c = cfg;
    c.algorithm = Algorithm::PD;
    Solver(p, c).step(state);
    return state;
}

IterState step_proj(IterState state, const ProblemSpec& p, const SolverConfig& cfg) {
    SolverConfig c = cfg;
    c.algorithm = Algorithm::PROJ;
    Solver(p, c).step(state);
    return state;
}

std::pair<IterState, RunReport> run(const ProblemSpec& p, const SolverConfig& cfg, std::optional<IterState> init) {
    return Solver(p, cfg).run(std::move(init));
}

namespace {

double gamma1_term(const ProblemSpec& p) {
    const auto& g = p.grid;
    const auto& mk = p.mask;
    if (!mk.has_neumann(g)) return 0.0;
    const double area = g.dim == 2 ? g.h : 1.0;
    double s = 0.0;
    for (int j = 0; j < g.n[1]; ++j)
        for (int i = 0; i <= g.n[0]; ++i)
            if (mk.xface_neumann(g, i, j)) {
                int a = mk.in(g, i, j) ? i : i - 1;
                s += p.gamma(p.u0_clamped(g.x_center(a), g.dim == 2 ? g.y_center(j) : 0.0)) * area;
            }
    if (g.dim == 2)
        for (int j = 0; j <= g.n[1]; ++j)
            for (int i = 0; i < g.n[0]; ++i)
                if (mk.yface_neumann(g, i, j)) {
                    int b = mk.in(g, i, j) ? j : j - 1;
                    s += p.gamma(p.u0_clamped(g.x_center(i), g.y_center(b))) * area;
                }
    return s;
}

}  // namespace

double lagrangian_value(const ScalarField& v, const FluxField& sigma, const ProblemSpec& p) {
    FluxField g = gradient(p.grid, p.mask, v, problem_ghosts(p));
    return inner_faces(p.grid, p.mask, g, sigma);
}

double dual_objective(const FluxField& sigma, const ProblemSpec& p) {
    return lagrangian_value(reference_field(p), sigma, p) + gamma1_term(p);
}

double certified_dual(const FluxField& sigma, const ProblemSpec& p) {
    const auto& g = p.grid;
    ScalarField d = divergence(g, p.mask, sigma);
    ScalarField v0 = reference_field(p);
    double s = 0.0;
    for (int c = 0; c < g.ncols(); ++c) {
        if (!p.mask.inside[c]) continue;
        for (int k = 0; k < g.nt; ++k) {
            std::size_t i = std::size_t(c) * g.nt + k;
            // L(v) - L(v0) = -<v - v0, div sigma>; minimise each cell over v in [0,1]
            s += std::min(d.values[i] * v0.values[i], -d.values[i] * (1.0 - v0.values[i]));
        }
    }
    return dual_objective(sigma, p) + s * g.cell_volume();
}

double scheme_energy(const ScalarField& v, const ProblemSpec& p) {
    Lifting lift(p.grid, p.mask);
    LevelParams lp = level_params(p);
    FaceVectorField q = lift.zeros();
    lift.expand(gradient(p.grid, p.mask, v, problem_ghosts(p)), q);
    const int D = lift.components();
    const double inf = std::numeric_limits<double>::infinity();
    double e = 0.0;
    auto family = [&](const std::array<std::vector<double>, 3>& fam, const std::vector<std::uint8_t>& act,
                      std::size_t layers, std::size_t offset, const std::vector<double>& level) {
        for (std::size_t pos = 0; pos < act.size(); ++pos) {
            if (!act[pos]) continue;
            for (std::size_t l = 0; l < level.size(); ++l) {
                std::size_t idx = pos * layers + offset + l;
                double vec[3];
                double scale = 0.0;
                for (int a = 0; a < D; ++a) {
                    vec[a] = fam[a][idx];
                    scale += std::abs(vec[a]);
                }
                if (vec[D - 1] > 0 && vec[D - 1] <= 1e-12 * std::max(1.0, scale)) vec[D - 1] = 0.0;
                double hv = h_f(p.integrand, level[l], std::span<const double>(vec, D));
                if (hv == inf) return false;
                e += hv;
            }
        }
        return true;
    };
    if (!family(q.x, lift.x_active(), lift.xlayers(), 0, lp.spatial_level)) return inf;
    if (p.grid.dim == 2 && !family(q.y, lift.y_active(), lift.xlayers(), 0, lp.spatial_level)) return inf;
    if (!family(q.t, lift.t_active(), lift.tlevels(), 1, lp.vertical_level)) return inf;
    e *= lift.face_weight();
    // linear Neumann part: the trace -gamma' paired with the jump to v0
    if (p.mask.has_neumann(p.grid)) {
        FluxField tr(p.grid);
        project_neumann_trace(tr, p);
        e += lagrangian_value(v, tr, p);
    }
    return e;
}

}  // namespace liftdual
