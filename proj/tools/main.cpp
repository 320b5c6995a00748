#include <iostream>

#include "CLI11.hpp"
#include "liftdual/commands.hpp"

using namespace liftdual;

int main(int argc, char** argv) {
    CLI::App app{"liftdual: lifted duality solver for non-convex calibration problems"};
    app.require_subcommand(1);
    std::vector<std::string> overrides;

    std::string config;
    auto* solve = app.add_subcommand("solve", "run PD or PROJ and write a run directory");
    solve->add_option("config", config, "config file")->required();
    solve->add_option("--set", overrides, "key=value override, repeatable");

    double lo = 0, hi = 0, tol = 0;
    auto* sweep = app.add_subcommand("sweep", "bisect lambda for the onset of a free boundary");
    sweep->add_option("config", config, "config file")->required();
    auto* lo_opt = sweep->add_option("--lo", lo, "lower end of the lambda bracket");
    auto* hi_opt = sweep->add_option("--hi", hi, "upper end of the lambda bracket");
    auto* tol_opt = sweep->add_option("--tol", tol, "stop when the bracket is this narrow");
    sweep->add_option("--set", overrides, "key=value override, repeatable");

    std::string run_dir;
    auto* verify = app.add_subcommand("verify", "check calibration residuals and the duality gap of a run");
    verify->add_option("run_dir", run_dir, "run directory")->required();

    std::string format = "all";
    auto* exp = app.add_subcommand("export", "write CSV tables, PGM heatmaps and streamlines");
    exp->add_option("run_dir", run_dir, "run directory")->required();
    exp->add_option("--format", format, "csv, pgm, streamlines or all");

    std::string kind;
    auto* oracle = app.add_subcommand("oracle", "write a run directory holding a closed-form pair");
    oracle->add_option("config", config, "config file")->required();
    oracle->add_option("--kind", kind, "value_function or convex")->required();
    oracle->add_option("--set", overrides, "key=value override, repeatable");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    CommandIo io{std::cout, std::cerr};
    try {
        if (*verify) return cmd_verify(run_dir, io);
        if (*exp) return cmd_export(run_dir, format, io);
        RunConfig rc = build_run_config(load_with_overrides(config, overrides));
        if (*solve) return cmd_solve(rc, io);
        if (*oracle) return cmd_oracle(rc, kind, io);
        std::optional<double> l, h, t;
        if (*lo_opt) l = lo;
        if (*hi_opt) h = hi;
        if (*tol_opt) t = tol;
        return cmd_sweep_lambda(rc, l, h, t, io);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
