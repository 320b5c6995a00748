#include "liftdual/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace liftdual {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "seed",
        "problem.integrand", "problem.lambda", "problem.u0", "problem.neumann", "problem.gamma_prime",
        "grid.dim", "grid.x0", "grid.x1", "grid.y0", "grid.y1", "grid.nx", "grid.nt", "grid.m", "grid.M",
        "grid.shape", "grid.radius", "grid.cx", "grid.cy",
        "solver.algorithm", "solver.alpha", "solver.beta", "solver.max_iters", "solver.tol",
        "solver.check_every", "solver.inner", "solver.overrelax", "solver.clamp", "solver.level",
        "solver.gap_constant",
        "output.dir", "output.levels", "output.images",
        "sweep.lambda_lo", "sweep.lambda_hi", "sweep.tol", "sweep.threshold",
        "verify.r1_max", "verify.r2_max", "verify.r3_max", "verify.gap_max", "verify.margin",
    };
    return keys;
}

double parse_number(const std::string& key, const std::string& v) {
    std::size_t used = 0;
    double x = 0;
    try {
        x = std::stod(v, &used);
    } catch (const std::exception&) {
        throw ConfigError("'" + key + "': expected a number, got '" + v + "'");
    }
    if (used != v.size() || !std::isfinite(x)) throw ConfigError("'" + key + "': expected a number, got '" + v + "'");
    return x;
}

}  // namespace

std::string RawConfig::str(const std::string& key, const std::string& fallback) const {
    auto it = values.find(key);
    return it == values.end() ? fallback : it->second;
}

double RawConfig::num(const std::string& key, double fallback) const {
    auto it = values.find(key);
    return it == values.end() ? fallback : parse_number(key, it->second);
}

int RawConfig::integer(const std::string& key, int fallback) const {
    if (!has(key)) return fallback;
    double x = num(key, 0);
    if (x != std::floor(x) || std::abs(x) > 1e9) throw ConfigError("'" + key + "': expected an integer");
    return int(x);
}

bool RawConfig::flag(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    std::string v = values.at(key);
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("'" + key + "': expected a boolean, got '" + v + "'");
}

std::vector<double> RawConfig::list(const std::string& key, const std::vector<double>& fallback) const {
    if (!has(key)) return fallback;
    std::vector<double> out;
    std::stringstream ss(values.at(key));
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_number(key, trim(item)));
    if (out.empty()) throw ConfigError("'" + key + "': empty list");
    return out;
}

RawConfig parse_config(const std::string& text) {
    RawConfig cfg;
    cfg.text = text;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto where = " (line " + std::to_string(lineno) + ")";
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("unterminated section header" + where);
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) throw ConfigError("empty section name" + where);
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("expected key = value" + where);
        std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("missing key" + where);
        if (value.empty()) throw ConfigError("missing value for '" + key + "'" + where);
        if (!section.empty() && key.find('.') == std::string::npos) key = section + "." + key;
        if (!known_keys().count(key)) throw ConfigError("unknown key '" + key + "'" + where);
        if (!cfg.values.emplace(key, value).second) throw ConfigError("duplicate key '" + key + "'" + where);
    }
    return cfg;
}

RawConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot read config '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

namespace {

Integrand make_integrand(const std::string& name, double lambda) {
    if (name == "alt_caffarelli") {
        if (!(lambda > 0)) throw ConfigError("problem.lambda must be positive");
        return alt_caffarelli(lambda);
    }
    if (name == "quadratic_convex") return quadratic_convex();
    throw ConfigError("unknown problem.integrand '" + name + "'");
}

Domain make_domain(const RawConfig& raw, std::string& shape) {
    int dim = raw.integer("grid.dim", 1);
    if (dim != 1 && dim != 2) throw ConfigError("grid.dim must be 1 or 2");
    double x0 = raw.num("grid.x0", dim == 1 ? 0.0 : -1.0), x1 = raw.num("grid.x1", dim == 1 ? 2.0 : 1.0);
    int nx = raw.integer("grid.nx", 64), nt = raw.integer("grid.nt", 32);
    double m = raw.num("grid.m", 0.0), M = raw.num("grid.M", 1.0);
    if (!(x1 > x0) || nx < 2 || nt < 2 || !(M > m)) throw ConfigError("invalid grid extents or resolution");
    shape = raw.str("grid.shape", "rectangle");
    try {
        if (dim == 1) {
            if (shape != "rectangle") throw ConfigError("grid.shape must be rectangle in 1D");
            return make_grid(GridSpec::line(x0, x1, nx, m, M, nt), Rectangle{});
        }
        double y0 = raw.num("grid.y0", x0), y1 = raw.num("grid.y1", x0 + (x1 - x0));
        double h = (x1 - x0) / nx;
        double nyf = (y1 - y0) / h;
        int ny = int(std::lround(nyf));
        if (ny < 2 || std::abs(nyf - ny) > 1e-9 * nyf) throw ConfigError("grid.y extent must be a multiple of h");
        GridSpec g = GridSpec::box({x0, y0}, h, {nx, ny}, m, M, nt);
        if (shape == "rectangle") return make_grid(g, Rectangle{});
        if (shape == "disc") {
            double cx = raw.num("grid.cx", 0.5 * (x0 + x1)), cy = raw.num("grid.cy", 0.5 * (y0 + y1));
            double r = raw.num("grid.radius", 0.5 * std::min(x1 - x0, y1 - y0));
            return make_grid(g, Disc{{cx, cy}, r});
        }
        throw ConfigError("unknown grid.shape '" + shape + "'");
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
}

}  // namespace

RunConfig build_run_config(const RawConfig& raw) {
    RunConfig rc;
    rc.raw = raw;
    Domain d = make_domain(raw, rc.shape);
    const auto& g = d.grid;
    std::string sides = raw.str("problem.neumann", "none");
    if (sides != "none") {
        std::stringstream ss(sides);
        std::string side;
        const double eps = 1e-9 * g.h;
        const double x0 = g.origin[0], x1 = g.origin[0] + g.n[0] * g.h;
        const double y0 = g.origin[1], y1 = g.origin[1] + g.n[1] * g.h;
        while (std::getline(ss, side, ',')) {
            side = trim(side);
            std::function<bool(double, double)> pred;
            if (side == "x_min") pred = [=](double x, double) { return x <= x0 + eps; };
            else if (side == "x_max") pred = [=](double x, double) { return x >= x1 - eps; };
            else if (side == "y_min" && g.dim == 2) pred = [=](double, double y) { return y <= y0 + eps; };
            else if (side == "y_max" && g.dim == 2) pred = [=](double, double y) { return y >= y1 - eps; };
            else throw ConfigError("unknown problem.neumann side '" + side + "'");
            d.mask.set_neumann(g, pred);
        }
    }
    rc.problem = make_problem(make_integrand(raw.str("problem.integrand", "alt_caffarelli"), raw.num("problem.lambda", 1.0)), d);
    double u0 = raw.num("problem.u0", 1.0), gp = raw.num("problem.gamma_prime", 0.0);
    rc.problem.u0 = [u0](double, double) { return u0; };
    rc.problem.gamma_prime = [gp](double) { return gp; };

    auto& s = rc.solver;
    try {
        s.algorithm = parse_algorithm(raw.str("solver.algorithm", "proj"));
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    s.alpha = raw.num("solver.alpha", 0.0);
    s.beta = raw.num("solver.beta", 0.0);
    s.max_iters = raw.integer("solver.max_iters", s.max_iters);
    s.tol = raw.num("solver.tol", s.tol);
    s.check_every = raw.integer("solver.check_every", s.check_every);
    std::string inner = raw.str("solver.inner", "vcycle");
    if (inner == "exact") s.inner = InnerSolve::Exact;
    else if (inner == "vcycle") s.inner = InnerSolve::VCycle;
    else throw ConfigError("solver.inner must be exact or vcycle");
    s.overrelax = raw.flag("solver.overrelax", true);
    if (raw.has("solver.clamp")) s.clamp = raw.flag("solver.clamp", false);
    s.level = raw.num("solver.level", 0.5);
    s.declared_gap_constant = raw.num("solver.gap_constant", s.declared_gap_constant);
    if (s.alpha < 0 || s.beta < 0 || s.max_iters < 1 || s.check_every < 1 || s.tol < 0 || !(s.level > 0 && s.level < 1))
        throw ConfigError("invalid solver settings");
    try {
        (void)s.resolved(g);
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }

    rc.output_dir = raw.str("output.dir", "run");
    rc.levels = raw.list("output.levels", {0.5});
    for (double l : rc.levels)
        if (!(l > 0 && l < 1)) throw ConfigError("output.levels must lie in (0, 1)");
    rc.images = raw.flag("output.images", true);
    double seed = raw.num("seed", 0.0);
    if (seed < 0 || seed != std::floor(seed)) throw ConfigError("seed must be a non-negative integer");
    rc.seed = std::uint64_t(seed);

    rc.sweep.lambda_lo = raw.num("sweep.lambda_lo", 0.0);
    rc.sweep.lambda_hi = raw.num("sweep.lambda_hi", 0.0);
    rc.sweep.tol = raw.num("sweep.tol", rc.sweep.tol);
    rc.sweep.threshold = raw.num("sweep.threshold", rc.sweep.threshold);
    rc.verify.r1_max = raw.num("verify.r1_max", rc.verify.r1_max);
    rc.verify.r2_max = raw.num("verify.r2_max", rc.verify.r2_max);
    rc.verify.r3_max = raw.num("verify.r3_max", rc.verify.r3_max);
    rc.verify.gap_max = raw.num("verify.gap_max", rc.verify.gap_max);
    rc.verify.margin = raw.num("verify.margin", rc.verify.margin);
    return rc;
}

ProblemSpec with_lambda(const RunConfig& rc, double lambda) {
    if (rc.problem.integrand.name != "alt_caffarelli") throw ConfigError("lambda sweeps need problem.integrand = alt_caffarelli");
    if (!(lambda > 0)) throw ConfigError("lambda must be positive");
    ProblemSpec p = rc.problem;
    p.integrand = alt_caffarelli(lambda);
    return p;
}

}  // namespace liftdual
