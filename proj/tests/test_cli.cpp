#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "liftdual/commands.hpp"
#include "liftdual/fieldio.hpp"

using namespace liftdual;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    fs::path p = fs::temp_directory_path() / ("liftdual_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::string read(const fs::path& p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::size_t count_lines(const fs::path& p) {
    std::ifstream f(p);
    std::string line;
    std::size_t n = 0;
    while (std::getline(f, line)) n += !line.empty();
    return n;
}

int run_cli(const std::string& args) {
    int rc = std::system((std::string(LIFTDUAL_CLI) + " " + args + " > /dev/null 2>&1").c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

RunConfig config_from(const std::string& text) { return build_run_config(parse_config(text)); }

std::string small_1d(const fs::path& dir, double lam) {
    return "[problem]\nintegrand = alt_caffarelli\nlambda = " + std::to_string(lam) +
           "\n[grid]\nnx = 64\nnt = 32\n[solver]\nmax_iters = 3000\n[output]\ndir = " + dir.string() + "\n";
}

}  // namespace

TEST_CASE("config parsing") {
    auto raw = parse_config("# comment\nseed = 3\n[problem]\nlambda = 2.5  # trailing\n[grid]\nnx = 16\n");
    CHECK(raw.num("problem.lambda", 0) == 2.5);
    CHECK(raw.integer("grid.nx", 0) == 16);
    CHECK(raw.integer("seed", 0) == 3);
    auto rc = build_run_config(raw);
    CHECK(rc.problem.integrand.lambda == 2.5);
    CHECK(rc.problem.grid.n[0] == 16);
    CHECK(rc.seed == 3);
    CHECK(rc.problem.grid.h == doctest::Approx(2.0 / 16));
    CHECK(parse_config("problem.lambda = 3\n").num("problem.lambda", 0) == 3.0);
    CHECK_THROWS_AS(parse_config("[problem]\nbogus = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[problem]\nlambda = 1\nlambda = 2\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[problem]\nlambda\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[problem]\nlambda =\n"), ConfigError);
    CHECK_THROWS_AS(config_from("[problem]\nlambda = abc\n"), ConfigError);
    CHECK_THROWS_AS(config_from("[solver]\nalgorithm = newton\n"), ConfigError);
    CHECK_THROWS_AS(config_from("[grid]\nnx = 1.5\n"), ConfigError);
    try {
        parse_config("[grid]\nnx = 4\nnope = 1\n");
        FAIL("expected a ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("3") != std::string::npos);
    }
}

TEST_CASE("scalar and flux CSV round trip bit-exactly") {
    std::mt19937_64 rng(6);
    auto dir = scratch("csv");
    for (const auto& d : {make_grid(GridSpec::line(0.0, 2.0, 10, 0.0, 1.0, 7), Rectangle{}),
                          make_grid(GridSpec::box({-1.0, -1.0}, 0.2, {10, 10}, 0.0, 1.0, 5), Disc{{0.0, 0.0}, 1.0})}) {
        const auto& g = d.grid;
        auto v = testing_helpers::random_scalar(g, d.mask, rng);
        write_scalar_csv((dir / "v.csv").string(), v, g, d.mask);
        CHECK(count_lines(dir / "v.csv") == 1 + std::size_t(d.mask.count_inside()) * g.nt);
        CHECK(read_scalar_csv((dir / "v.csv").string(), g, d.mask).values == v.values);

        FluxField s(g);
        std::normal_distribution<double> n01;
        for (int j = 0; j < g.n[1]; ++j)
            for (int i = 0; i <= g.n[0]; ++i)
                if (d.mask.xface_active(g, i, j))
                    for (int k = 0; k < g.nt; ++k) s.sx[std::size_t(g.xface(i, j)) * g.nt + k] = n01(rng);
        if (g.dim == 2)
            for (int j = 0; j <= g.n[1]; ++j)
                for (int i = 0; i < g.n[0]; ++i)
                    if (d.mask.yface_active(g, i, j))
                        for (int k = 0; k < g.nt; ++k) s.sy[std::size_t(g.yface(i, j)) * g.nt + k] = n01(rng);
        for (int c = 0; c < g.ncols(); ++c)
            if (d.mask.inside[c])
                for (int kk = 0; kk <= g.nt; ++kk) s.st[std::size_t(c) * (g.nt + 1) + kk] = n01(rng);
        FluxField back(g);
        for (int comp = 0; comp < (g.dim == 2 ? 3 : 2); ++comp) {
            int which = g.dim == 2 ? comp : (comp == 0 ? 0 : 2);
            write_flux_csv((dir / "s.csv").string(), s, which, g, d.mask);
            read_flux_csv((dir / "s.csv").string(), back, which, g);
        }
        CHECK(back.sx == s.sx);
        CHECK(back.sy == s.sy);
        CHECK(back.st == s.st);

        Profile u{std::vector<double>(g.ncols(), 0.0), d.mask};
        for (int c = 0; c < g.ncols(); ++c)
            if (d.mask.inside[c]) u.u[c] = n01(rng);
        write_profile_csv((dir / "u.csv").string(), u, g);
        CHECK(read_profile_csv((dir / "u.csv").string(), g, d.mask).u == u.u);
    }
    CHECK_THROWS_AS(read_scalar_csv((dir / "missing.csv").string(), GridSpec::line(0, 1, 4, 0, 1, 4), DomainMask{}),
                    IoError);
}

TEST_CASE("PGM images") {
    auto dir = scratch("pgm");
    Image img{5, 3, {}};
    for (int n = 0; n < 15; ++n) img.pixels.push_back(n);
    img.pixels[4] = std::nan("");
    write_pgm((dir / "a.pgm").string(), img);
    auto back = read_pgm((dir / "a.pgm").string());
    CHECK(back.width == 5);
    CHECK(back.height == 3);
    CHECK(back.pixels[0] == 0.0);
    CHECK(back.pixels[4] == 0.0);
    CHECK(back.pixels[14] == 255.0);
    auto range = read(dir / "a.pgm.range");
    CHECK(range.find("min 0") != std::string::npos);
    CHECK(range.find("max 14") != std::string::npos);
}

TEST_CASE("streamlines of a constant field are straight") {
    auto d = make_grid(GridSpec::box({0.0, 0.0}, 0.1, {10, 10}, 0.0, 1.0, 10), Rectangle{});
    FluxField s(d.grid);
    for (auto& x : s.sx) x = 1.0;
    for (auto& x : s.sy) x = 0.5;
    for (auto& x : s.st) x = -0.25;
    auto lines = trace_streamlines(s, d.grid, d.mask, 1, 8, 50);
    REQUIRE(lines.size() == 8);
    for (const auto& l : lines) {
        REQUIRE(l.points.size() >= 3);
        const auto& a = l.points.front();
        const auto& b = l.points.back();
        double dir[3] = {b[0] - a[0], b[1] - a[1], b[2] - a[2]};
        double len = std::sqrt(dir[0] * dir[0] + dir[1] * dir[1] + dir[2] * dir[2]);
        REQUIRE(len > 0);
        for (const auto& p : l.points) {
            double w[3] = {p[0] - a[0], p[1] - a[1], p[2] - a[2]};
            double c0 = w[1] * dir[2] - w[2] * dir[1], c1 = w[2] * dir[0] - w[0] * dir[2],
                   c2 = w[0] * dir[1] - w[1] * dir[0];
            CHECK(std::sqrt(c0 * c0 + c1 * c1 + c2 * c2) / len <= 1e-9);
        }
        // direction matches the field
        CHECK(dir[1] / dir[0] == doctest::Approx(0.5));
        CHECK(dir[2] / dir[0] == doctest::Approx(-0.25));
    }
    auto again = trace_streamlines(s, d.grid, d.mask, 1, 8, 50);
    CHECK(again.front().points == lines.front().points);
}

TEST_CASE("malformed config exits 2 without artifacts") {
    auto dir = scratch("bad");
    write(dir / "bad.cfg", "[problem]\nlambda = 1\n[grid]\nnx = banana\n[output]\ndir = " + (dir / "out").string() + "\n");
    CHECK(run_cli("solve " + (dir / "bad.cfg").string()) == 2);
    CHECK_FALSE(fs::exists(dir / "out"));
    CHECK(run_cli("solve " + (dir / "nope.cfg").string()) == 2);
    CHECK(run_cli("frobnicate") == 2);
    CHECK(run_cli("verify " + (dir / "empty").string()) == 6);
}

TEST_CASE("solve, verify and export a 1D run") {
    auto dir = scratch("solve");
    std::ostringstream out, err;
    CommandIo io{out, err};
    auto rc = config_from(small_1d(dir / "run", 1.0));
    REQUIRE(cmd_solve(rc, io) == kExitOk);
    for (const char* f : {"config.txt", "v.csv", "sigma_x.csv", "sigma_t.csv", "u_0.5.csv", "summary.json", "v.pgm"})
        CHECK(fs::exists(dir / "run" / f));
    auto summary = read(dir / "run" / "summary.json");
    for (const char* k : {"\"primal\"", "\"dual\"", "\"gap\"", "\"iters\"", "\"converged\"", "\"wall_ms\"", "\"grid\"",
                          "\"lambda\"", "\"algorithm\""})
        CHECK(summary.find(k) != std::string::npos);
    CHECK(cmd_verify((dir / "run").string(), io) == kExitOk);
    CHECK(fs::exists(dir / "run" / "verify.json"));
    CHECK(cmd_export((dir / "run").string(), "all", io) == kExitOk);
    CHECK(count_lines(dir / "run" / "export" / "v.csv") == 1 + 64 * 32);
    CHECK(fs::exists(dir / "run" / "export" / "streamlines.csv"));
    auto pgm = read_pgm((dir / "run" / "export" / "v.pgm").string());
    CHECK(pgm.width == 64);
    CHECK(pgm.height == 32);
    CHECK(cmd_export((dir / "run").string(), "svg", io) == kExitUsage);

    // zeroing sigma breaks the calibration
    FluxField zero(rc.problem.grid);
    write_flux_csv((dir / "run" / "sigma_x.csv").string(), zero, 0, rc.problem.grid, rc.problem.mask);
    write_flux_csv((dir / "run" / "sigma_t.csv").string(), zero, 2, rc.problem.grid, rc.problem.mask);
    CHECK(cmd_verify((dir / "run").string(), io) == kExitNotCalibrated);
    fs::remove(dir / "run" / "v.csv");
    CHECK(cmd_verify((dir / "run").string(), io) == kExitMissing);
}

TEST_CASE("verify accepts the value-function oracle pair away from the walls") {
    auto dir = scratch("oracle");
    std::ostringstream out, err;
    auto rc = config_from("[problem]\nlambda = 4\n[grid]\nnx = 256\nnt = 128\n[verify]\nmargin = 0.1\n[output]\ndir = " +
                          (dir / "pair").string() + "\n");
    REQUIRE(cmd_oracle(rc, "value_function", {out, err}) == kExitOk);
    CHECK(cmd_verify((dir / "pair").string(), {out, err}) == kExitOk);
    CHECK(cmd_oracle(rc, "nonsense", {out, err}) == kExitUsage);
}

TEST_CASE("sweep bracket below the transition exits 5") {
    auto dir = scratch("sweep");
    std::ostringstream out, err;
    auto rc = config_from("[grid]\ndim = 2\nnx = 32\nnt = 8\n[solver]\nmax_iters = 400\n[output]\ndir = " +
                          (dir / "s").string() + "\n");
    CHECK(cmd_sweep_lambda(rc, 0.1, 0.2, 0.05, {out, err}) == kExitBracket);
    CHECK(cmd_sweep_lambda(rc, 3.0, 2.0, 0.05, {out, err}) == kExitUsage);
}
