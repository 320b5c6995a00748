#include "liftdual/commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>

#include "json.hpp"
#include "liftdual/analysis.hpp"
#include "liftdual/fieldio.hpp"
#include "liftdual/oracles.hpp"
#include "liftdual/solver.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace liftdual {

RawConfig load_with_overrides(const std::string& path, const std::vector<std::string>& overrides) {
    RawConfig raw = load_config(path);
    for (const auto& kv : overrides) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw ConfigError("override '" + kv + "' is not key=value");
        auto probe = parse_config(kv);  // validates the key
        for (auto& [k, v] : probe.values) raw.values[k] = v;
    }
    // canonical text so a run directory reproduces exactly what ran
    raw.text.clear();
    for (auto& [k, v] : raw.values) raw.text += k + " = " + v + "\n";
    return raw;
}

namespace {

std::string level_tag(double s) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", s);
    return buf;
}

void write_text(const fs::path& p, const std::string& s) {
    std::ofstream f(p);
    if (!f) throw IoError("cannot write '" + p.string() + "'");
    f << s;
}

json grid_json(const GridSpec& g, const std::string& shape) {
    return {{"dim", g.dim}, {"nx", g.n[0]}, {"ny", g.n[1]}, {"nt", g.nt}, {"h", g.h}, {"ht", g.ht},
            {"m", g.t_min}, {"M", g.t_max}, {"shape", shape}};
}

Image v_image(const ScalarField& v, const GridSpec& g, const DomainMask& mask, int slice) {
    Image img;
    if (g.dim == 1) {
        img = {g.n[0], g.nt, std::vector<double>(std::size_t(g.n[0]) * g.nt)};
        for (int r = 0; r < g.nt; ++r)
            for (int i = 0; i < g.n[0]; ++i) img.pixels[std::size_t(r) * g.n[0] + i] = v.values[std::size_t(i) * g.nt + (g.nt - 1 - r)];
        return img;
    }
    img = {g.n[0], g.n[1], std::vector<double>(std::size_t(g.n[0]) * g.n[1], std::nan(""))};
    for (int r = 0; r < g.n[1]; ++r)
        for (int i = 0; i < g.n[0]; ++i) {
            int j = g.n[1] - 1 - r;
            if (mask.in(g, i, j)) img.pixels[std::size_t(r) * g.n[0] + i] = v.values[std::size_t(g.col(i, j)) * g.nt + slice];
        }
    return img;
}

Image u_image(const Profile& u, const GridSpec& g) {
    Image img{g.n[0], g.n[1], std::vector<double>(std::size_t(g.n[0]) * g.n[1], std::nan(""))};
    for (int r = 0; r < g.n[1]; ++r)
        for (int i = 0; i < g.n[0]; ++i) {
            int j = g.n[1] - 1 - r;
            if (u.defined_on.in(g, i, j)) img.pixels[std::size_t(r) * g.n[0] + i] = u.u[g.col(i, j)];
        }
    return img;
}

void write_images(const fs::path& dir, const ScalarField& v, const std::vector<Profile>& profiles,
                  const std::vector<double>& levels, const GridSpec& g, const DomainMask& mask) {
    if (g.dim == 1) {
        write_pgm((dir / "v.pgm").string(), v_image(v, g, mask, 0));
    } else {
        for (int k = 0; k < g.nt; ++k) {
            char name[32];
            std::snprintf(name, sizeof name, "v_t%03d.pgm", k);
            write_pgm((dir / name).string(), v_image(v, g, mask, k));
        }
    }
    for (std::size_t l = 0; l < levels.size(); ++l)
        write_pgm((dir / ("u_" + level_tag(levels[l]) + ".pgm")).string(), u_image(profiles[l], g));
}

void write_fields(const fs::path& dir, const RunConfig& rc, const ProblemSpec& p, const ScalarField& v,
                  const FluxField& flux, const std::vector<Profile>& profiles) {
    const auto& g = p.grid;
    write_text(dir / "config.txt", rc.raw.text);
    write_scalar_csv((dir / "v.csv").string(), v, g, p.mask);
    write_flux_csv((dir / "sigma_x.csv").string(), flux, 0, g, p.mask);
    if (g.dim == 2) write_flux_csv((dir / "sigma_y.csv").string(), flux, 1, g, p.mask);
    write_flux_csv((dir / "sigma_t.csv").string(), flux, 2, g, p.mask);
    for (std::size_t l = 0; l < rc.levels.size(); ++l)
        write_profile_csv((dir / ("u_" + level_tag(rc.levels[l]) + ".csv")).string(), profiles[l], g);
    if (rc.images) write_images(dir, v, profiles, rc.levels, g, p.mask);
}

fs::path make_run_dir(const std::string& d) {
    fs::path dir(d);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create '" + d + "': " + ec.message());
    return dir;
}

std::vector<Profile> profiles_of(const ScalarField& v, const RunConfig& rc, const ProblemSpec& p) {
    std::vector<Profile> out;
    for (double s : rc.levels) out.push_back(extract_level(v, s, p.grid, p.mask));
    return out;
}

}  // namespace

int cmd_solve(const RunConfig& rc, CommandIo io) {
    const ProblemSpec& p = rc.problem;
    IterState st;
    RunReport rep;
    try {
        std::tie(st, rep) = run(p, rc.solver);
    } catch (const Error& e) {
        io.err << "solver failed: " << e.what() << "\n";
        return kExitNumeric;
    }
    Solver solver(p, rc.solver);
    FluxField flux = solver.flux(st.sigma);
    auto profiles = profiles_of(st.v, rc, p);
    Profile u = extract_level(st.v, rc.solver.level, p.grid, p.mask);
    double primal = primal_energy(u, p), dual = dual_objective(flux, p);
    fs::path dir = make_run_dir(rc.output_dir);
    write_fields(dir, rc, p, st.v, flux, profiles);

    json hist = {{"iters", rep.check_iters}, {"dual", rep.dual_history}, {"certified_dual", rep.certified_history},
                 {"primal", rep.primal_history}, {"gap", rep.gap_history}, {"residual", rep.residual_history}, {"sigma_residual", rep.sigma_residual_history}};
    json summary = {
        {"primal", primal},
        {"dual", dual},
        {"certified_dual", certified_dual(flux, p)},
        {"gap", primal - dual},
        {"iters", rep.iters_used},
        {"converged", rep.converged},
        {"wall_ms", rep.wall_ms},
        {"grid", grid_json(p.grid, rc.shape)},
        {"lambda", p.integrand.lambda},
        {"integrand", p.integrand.name},
        {"algorithm", to_string(rc.solver.algorithm)},
        {"level", rc.solver.level},
        {"mid_measure", mid_measure(st.v, p.grid, p.mask)},
        {"histogram", histogram(st.v, p.grid, p.mask, 10)},
        {"below_fraction", below_fraction(u, p.grid, rc.solver.level)},
        {"monotonicity_defect", monotonicity_defect(st.v, p.grid, p.mask)},
        {"observed_gap_constant", rep.observed_gap_constant},
        {"observed_flux_gap_constant", rep.observed_flux_gap_constant},
        {"declared_gap_constant", rep.declared_gap_constant},
        {"history", hist},
    };
    write_text(dir / "summary.json", summary.dump(2) + "\n");
    io.out << "primal " << std::setprecision(10) << primal << "\ndual " << dual << "\ngap " << primal - dual
           << "\niters " << rep.iters_used << (rep.converged ? " (converged)" : " (not converged)") << "\n";
    return rep.converged ? kExitOk : kExitNotConverged;
}

int cmd_sweep_lambda(const RunConfig& rc, std::optional<double> lo_in, std::optional<double> hi_in,
                     std::optional<double> tol_in, CommandIo io) {
    double lo = lo_in.value_or(rc.sweep.lambda_lo), hi = hi_in.value_or(rc.sweep.lambda_hi);
    double tol = tol_in.value_or(rc.sweep.tol);
    if (!(lo > 0) || !(hi > lo) || !(tol > 0)) {
        io.err << "sweep needs 0 < lambda_lo < lambda_hi and tol > 0\n";
        return kExitUsage;
    }
    json evals = json::array();
    std::optional<IterState> warm;
    auto classify = [&](double lam, bool reuse) {
        ProblemSpec p = with_lambda(rc, lam);
        auto [st, rep] = run(p, rc.solver, reuse ? warm : std::nullopt);
        Profile u = extract_level(st.v, rc.solver.level, p.grid, p.mask);
        double below = below_fraction(u, p.grid, rc.solver.level);
        bool fb = below > rc.sweep.threshold;
        evals.push_back({{"lambda", lam}, {"below_fraction", below}, {"regime", fb ? "free_boundary" : "constant"},
                         {"iters", rep.iters_used}, {"converged", rep.converged},
                         {"dual", rep.dual_history.back()}, {"primal", rep.primal_history.back()},
                         {"observed_gap_constant", rep.observed_gap_constant}, {"wall_ms", rep.wall_ms}});
        io.out << "lambda " << std::setprecision(6) << lam << "  below " << below << "  "
               << (fb ? "free_boundary" : "constant") << "  iters " << rep.iters_used << "\n";
        warm = std::move(st);
        return fb;
    };
    int n_fb = 0, n_const = 0;
    const double lo0 = lo, hi0 = hi;
    try {
        while (hi - lo > tol) {
            double mid = 0.5 * (lo + hi);
            if (classify(mid, true)) {
                hi = mid;
                ++n_fb;
            } else {
                lo = mid;
                ++n_const;
            }
        }
        // with one-sided midpoints the far endpoint must confirm the transition
        if (n_fb == 0 && !classify(hi0, false)) return kExitBracket;
        if (n_const == 0 && classify(lo0, false)) return kExitBracket;
    } catch (const ConfigError& e) {
        io.err << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        io.err << "solver failed: " << e.what() << "\n";
        return kExitNumeric;
    }
    double star = 0.5 * (lo + hi);
    fs::path dir = make_run_dir(rc.output_dir);
    json out = {{"lambda_star", star}, {"bracket", {lo, hi}}, {"initial_bracket", {lo0, hi0}}, {"tol", tol},
                {"threshold", rc.sweep.threshold}, {"evaluations", evals}};
    write_text(dir / "sweep.json", out.dump(2) + "\n");
    io.out << "lambda_star " << std::setprecision(8) << star << "\n";
    return kExitOk;
}

namespace {

bool has_artifacts(const fs::path& dir, int dim) {
    for (const char* f : {"config.txt", "v.csv", "sigma_x.csv", "sigma_t.csv"})
        if (!fs::exists(dir / f)) return false;
    return dim == 1 || fs::exists(dir / "sigma_y.csv");
}

struct LoadedRun {
    RunConfig rc;
    ScalarField v;
    FluxField flux;
};

LoadedRun load_run(const fs::path& dir) {
    LoadedRun r{build_run_config(load_config((dir / "config.txt").string())), {}, {}};
    const auto& g = r.rc.problem.grid;
    if (!has_artifacts(dir, g.dim)) throw IoError("run directory '" + dir.string() + "' is missing artifacts");
    r.v = read_scalar_csv((dir / "v.csv").string(), g, r.rc.problem.mask);
    r.flux = FluxField(g);
    read_flux_csv((dir / "sigma_x.csv").string(), r.flux, 0, g);
    if (g.dim == 2) read_flux_csv((dir / "sigma_y.csv").string(), r.flux, 1, g);
    read_flux_csv((dir / "sigma_t.csv").string(), r.flux, 2, g);
    return r;
}

json norms_json(const ResidualNorms& n) { return {{"l1", n.l1}, {"linf", n.linf}, {"count", n.count}}; }

}  // namespace

int cmd_verify(const std::string& run_dir, CommandIo io) {
    fs::path dir(run_dir);
    if (!fs::exists(dir / "config.txt")) {
        io.err << "no config.txt in '" << run_dir << "'\n";
        return kExitMissing;
    }
    LoadedRun r;
    try {
        r = load_run(dir);
    } catch (const ConfigError& e) {
        io.err << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        io.err << e.what() << "\n";
        return kExitMissing;
    }
    const ProblemSpec& p = r.rc.problem;
    const auto& g = p.grid;
    const double s = r.rc.solver.level;
    fs::path ufile = dir / ("u_" + level_tag(s) + ".csv");
    Profile u = fs::exists(ufile) ? read_profile_csv(ufile.string(), g, p.mask) : extract_level(r.v, s, g, p.mask);

    const double margin = r.rc.verify.margin;
    const double x0 = g.origin[0], x1 = g.origin[0] + g.n[0] * g.h;
    const double y0 = g.origin[1], y1 = g.origin[1] + g.n[1] * g.h;
    std::function<bool(double, double)> region;
    if (margin > 0)
        region = [=](double x, double y) {
            bool ok = x >= x0 + margin && x <= x1 - margin;
            if (g.dim == 2) ok = ok && y >= y0 + margin && y <= y1 - margin;
            return ok;
        };
    auto res = calibration_residuals(u, r.flux, p, region);
    double primal = primal_energy(u, p), dual = dual_objective(r.flux, p);
    double gap = primal - dual, gap_rel = gap / std::max(std::abs(primal), 1e-300);
    auto co = coarea_check(r.v, p, 16);
    double mono = monotonicity_defect(r.v, g, p.mask);
    const auto& th = r.rc.verify;
    bool ok1 = res.n1.l1 <= th.r1_max, ok2 = res.n2.l1 <= th.r2_max, ok3 = res.n3.l1 <= th.r3_max;
    bool okg = std::abs(gap_rel) <= th.gap_max;
    bool calibrated = ok1 && ok2 && ok3 && okg;

    json report = {
        {"residuals", {{"r1", norms_json(res.n1)}, {"r2", norms_json(res.n2)}, {"r3", norms_json(res.n3)}}},
        {"thresholds", {{"r1_l1", th.r1_max}, {"r2_l1", th.r2_max}, {"r3_l1", th.r3_max}, {"gap_rel", th.gap_max}}},
        {"primal", primal},
        {"dual", dual},
        {"duality_gap", gap},
        {"gap_relative", gap_rel},
        {"monotonicity_defect", mono},
        {"coarea", {{"lhs", co.lhs}, {"rhs", co.rhs}, {"defect", co.defect}}},
        {"margin", margin},
        {"calibrated", calibrated},
    };
    write_text(dir / "verify.json", report.dump(2) + "\n");

    auto line = [&](const char* name, double l1, double linf, double limit, bool ok) {
        io.out << std::left << std::setw(10) << name << std::right << std::setw(14) << std::setprecision(5) << l1
               << std::setw(14) << linf << std::setw(12) << limit << "  " << (ok ? "ok" : "FAIL") << "\n";
    };
    io.out << std::left << std::setw(10) << "check" << std::right << std::setw(14) << "l1" << std::setw(14) << "linf"
           << std::setw(12) << "limit" << "\n";
    line("r1", res.n1.l1, res.n1.linf, th.r1_max, ok1);
    line("r2", res.n2.l1, res.n2.linf, th.r2_max, ok2);
    line("r3", res.n3.l1, res.n3.linf, th.r3_max, ok3);
    line("gap_rel", gap_rel, gap, th.gap_max, okg);
    io.out << "monotonicity_defect " << mono << "\ncoarea lhs " << co.lhs << " rhs " << co.rhs << "\n"
           << (calibrated ? "calibrated" : "not calibrated") << "\n";
    return calibrated ? kExitOk : kExitNotCalibrated;
}

std::vector<Streamline> trace_streamlines(const FluxField& s, const GridSpec& g, const DomainMask& mask,
                                          std::uint64_t seed, int n_seeds, int max_steps) {
    const int nt = g.nt;
    // cell-centred vector field
    std::vector<std::array<double, 3>> cc(g.ncells(), {0, 0, 0});
    for (int j = 0; j < g.n[1]; ++j)
        for (int i = 0; i < g.n[0]; ++i) {
            if (!mask.in(g, i, j)) continue;
            int c = g.col(i, j);
            for (int k = 0; k < nt; ++k) {
                auto& e = cc[std::size_t(c) * nt + k];
                e[0] = 0.5 * (s.sx[std::size_t(g.xface(i, j)) * nt + k] + s.sx[std::size_t(g.xface(i + 1, j)) * nt + k]);
                if (g.dim == 2)
                    e[1] = 0.5 * (s.sy[std::size_t(g.yface(i, j)) * nt + k] + s.sy[std::size_t(g.yface(i, j + 1)) * nt + k]);
                e[2] = 0.5 * (s.st[std::size_t(c) * (nt + 1) + k] + s.st[std::size_t(c) * (nt + 1) + k + 1]);
            }
        }
    const double x0 = g.origin[0], y0 = g.origin[1];
    const double X = g.n[0] * g.h, Y = g.n[1] * g.h;
    auto inside = [&](const std::array<double, 3>& q) {
        if (q[2] < g.t_min || q[2] > g.t_max) return false;
        int i = int(std::floor((q[0] - x0) / g.h)), j = g.dim == 2 ? int(std::floor((q[1] - y0) / g.h)) : 0;
        return mask.in(g, i, j);
    };
    // trilinear interpolation between cell centres, clamped at the outer layer
    auto field = [&](const std::array<double, 3>& q) {
        double fx = std::clamp((q[0] - x0) / g.h - 0.5, 0.0, g.n[0] - 1.0);
        double fy = g.dim == 2 ? std::clamp((q[1] - y0) / g.h - 0.5, 0.0, g.n[1] - 1.0) : 0.0;
        double ft = std::clamp((q[2] - g.t_min) / g.ht - 0.5, 0.0, nt - 1.0);
        int i0 = std::min(int(fx), g.n[0] - 2 < 0 ? 0 : g.n[0] - 2), j0 = g.dim == 2 ? std::min(int(fy), g.n[1] - 2) : 0;
        int k0 = std::min(int(ft), nt - 2);
        double ax = fx - i0, ay = fy - j0, at = ft - k0;
        std::array<double, 3> out{0, 0, 0};
        double wsum = 0;
        for (int dj = 0; dj <= (g.dim == 2 ? 1 : 0); ++dj)
            for (int di = 0; di <= 1; ++di)
                for (int dk = 0; dk <= 1; ++dk) {
                    int i = i0 + di, j = j0 + dj;
                    if (!mask.in(g, i, j)) continue;
                    double w = (di ? ax : 1 - ax) * (g.dim == 2 ? (dj ? ay : 1 - ay) : 1.0) * (dk ? at : 1 - at);
                    const auto& e = cc[std::size_t(g.col(i, j)) * nt + k0 + dk];
                    for (int a = 0; a < 3; ++a) out[a] += w * e[a];
                    wsum += w;
                }
        if (wsum > 0)
            for (auto& o : out) o /= wsum;
        return out;
    };
    auto direction = [&](const std::array<double, 3>& q, bool& ok) {
        auto v = field(q);
        double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
        ok = n > 1e-12;
        if (ok)
            for (auto& c : v) c /= n;
        return v;
    };
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(x0, x0 + X), uy(y0, y0 + Y), ut(g.t_min, g.t_max);
    const double step = 0.5 * std::min(g.h, g.ht);
    std::vector<Streamline> lines;
    int attempts = 0;
    while (int(lines.size()) < n_seeds && attempts < 100 * n_seeds) {
        ++attempts;
        std::array<double, 3> q{ux(rng), g.dim == 2 ? uy(rng) : 0.0, ut(rng)};
        if (!inside(q)) continue;
        Streamline sl;
        sl.points.push_back(q);
        for (int n = 0; n < max_steps; ++n) {
            bool ok1 = false, ok2 = false;
            auto d1 = direction(q, ok1);
            if (!ok1) break;
            std::array<double, 3> mid{q[0] + 0.5 * step * d1[0], q[1] + 0.5 * step * d1[1], q[2] + 0.5 * step * d1[2]};
            auto d2 = direction(mid, ok2);
            if (!ok2) break;
            std::array<double, 3> next{q[0] + step * d2[0], q[1] + step * d2[1], q[2] + step * d2[2]};
            if (!inside(next)) break;
            q = next;
            sl.points.push_back(q);
        }
        lines.push_back(std::move(sl));
    }
    return lines;
}

int cmd_export(const std::string& run_dir, const std::string& format, CommandIo io) {
    if (format != "csv" && format != "pgm" && format != "streamlines" && format != "all") {
        io.err << "unknown export format '" << format << "' (csv, pgm, streamlines, all)\n";
        return kExitUsage;
    }
    fs::path dir(run_dir);
    if (!fs::exists(dir / "config.txt")) {
        io.err << "no config.txt in '" << run_dir << "'\n";
        return kExitMissing;
    }
    LoadedRun r;
    try {
        r = load_run(dir);
    } catch (const ConfigError& e) {
        io.err << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        io.err << e.what() << "\n";
        return kExitMissing;
    }
    const ProblemSpec& p = r.rc.problem;
    const auto& g = p.grid;
    fs::path out = make_run_dir((dir / "export").string());
    auto profiles = profiles_of(r.v, r.rc, p);
    bool all = format == "all";
    if (all || format == "csv") {
        write_scalar_csv((out / "v.csv").string(), r.v, g, p.mask);
        write_flux_csv((out / "sigma_x.csv").string(), r.flux, 0, g, p.mask);
        if (g.dim == 2) write_flux_csv((out / "sigma_y.csv").string(), r.flux, 1, g, p.mask);
        write_flux_csv((out / "sigma_t.csv").string(), r.flux, 2, g, p.mask);
        for (std::size_t l = 0; l < r.rc.levels.size(); ++l)
            write_profile_csv((out / ("u_" + level_tag(r.rc.levels[l]) + ".csv")).string(), profiles[l], g);
    }
    if (all || format == "pgm") write_images(out, r.v, profiles, r.rc.levels, g, p.mask);
    if (all || format == "streamlines") {
        auto lines = trace_streamlines(r.flux, g, p.mask, r.rc.seed, 48, 4 * (g.n[0] + g.nt));
        std::ofstream f(out / "streamlines.csv");
        if (!f) throw IoError("cannot write streamlines");
        f << "line,x" << (g.dim == 2 ? ",y" : "") << ",t\n" << std::setprecision(17);
        for (std::size_t l = 0; l < lines.size(); ++l)
            for (const auto& q : lines[l].points) {
                f << l << ',' << q[0];
                if (g.dim == 2) f << ',' << q[1];
                f << ',' << q[2] << '\n';
            }
    }
    io.out << "exported " << format << " to " << out.string() << "\n";
    return kExitOk;
}

int cmd_oracle(const RunConfig& rc, const std::string& kind, CommandIo io) {
    const ProblemSpec& p = rc.problem;
    const auto& g = p.grid;
    if (g.dim != 1) {
        io.err << "oracle pairs are one-dimensional\n";
        return kExitUsage;
    }
    const double a = g.n[0] * g.h;
    Profile u;
    FluxField flux;
    try {
        if (kind == "value_function") {
            if (p.integrand.name != "alt_caffarelli") throw ConfigError("value_function needs alt_caffarelli");
            double lam = p.integrand.lambda;
            Regime r = oracle_1d_value(a, lam).regime;
            u = oracle_1d_solution(a, lam, r == Regime::Constant ? Regime::Constant : Regime::FreeBoundary, g, p.mask);
            flux = value_function_field(lam, a, g, p.mask);
        } else if (kind == "convex") {
            if (!p.integrand.convex) throw ConfigError("convex oracle needs a convex integrand");
            u = quadratic_1d_discrete(g, p.mask).u;
            flux = build_convex_calibration(u, p);
        } else {
            throw ConfigError("unknown oracle '" + kind + "' (value_function, convex)");
        }
    } catch (const ConfigError& e) {
        io.err << e.what() << "\n";
        return kExitUsage;
    }
    ScalarField v(g);
    for (int c = 0; c < g.ncols(); ++c)
        for (int k = 0; k < g.nt; ++k) v.values[std::size_t(c) * g.nt + k] = g.t_center(k) <= u.u[c] ? 1.0 : 0.0;
    RunConfig rc2 = rc;
    rc2.levels = {rc.solver.level};
    fs::path dir = make_run_dir(rc.output_dir);
    write_fields(dir, rc2, p, v, flux, {u});
    double primal = primal_energy(u, p), dual = dual_objective(flux, p);
    json summary = {{"primal", primal}, {"dual", dual}, {"gap", primal - dual}, {"iters", 0}, {"converged", true},
                    {"wall_ms", 0.0}, {"grid", grid_json(g, rc.shape)}, {"lambda", p.integrand.lambda},
                    {"integrand", p.integrand.name}, {"algorithm", "oracle:" + kind}};
    write_text(dir / "summary.json", summary.dump(2) + "\n");
    io.out << "primal " << std::setprecision(10) << primal << "\ndual " << dual << "\n";
    return kExitOk;
}

}  // namespace liftdual
