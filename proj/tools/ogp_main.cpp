// ogp — off-diagonal geometric phase toolkit, command-line front end.

#include "ogp/run.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ogp::ConfigError("cannot read config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct CommonArgs {
    std::string config_file;
    std::string out_dir = ".";
    int workers = 1;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int grid = 0;
    bool grid_set = false;
    double tol = 0.0;
    bool tol_set = false;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool config_required) {
    auto* opt = cmd->add_option("--config", args.config_file, "experiment configuration (JSON)");
    if (config_required) opt->required();
    cmd->add_option("--out", args.out_dir, "output directory for artifacts");
    cmd->add_option("--workers", args.workers, "concurrent sweep workers")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", args.seed, "seed override for randomized checks")
        ->each([&](const std::string&) { args.seed_set = true; });
    cmd->add_option("--grid", args.grid, "grid steps override")
        ->check(CLI::PositiveNumber)
        ->each([&](const std::string&) { args.grid_set = true; });
    cmd->add_option("--tol", args.tol, "nodal tolerance override")
        ->each([&](const std::string&) { args.tol_set = true; });
}

int dispatch(const CommonArgs& args, const std::vector<ogp::RunMode>& allowed) {
    try {
        ogp::ExperimentConfig cfg;
        if (!args.config_file.empty()) {
            cfg = ogp::parse_config(read_file(args.config_file));
        } else {
            cfg.mode = ogp::RunMode::selftest;  // the only verb that runs without a config
        }
        if (std::find(allowed.begin(), allowed.end(), cfg.mode) == allowed.end()) {
            std::cerr << "error: config mode '" << ogp::to_string(cfg.mode)
                      << "' does not belong to this subcommand\n";
            return ogp::exit_validation;
        }
        ogp::RunOptions opts;
        opts.out_dir = args.out_dir;
        opts.workers = args.workers;
        if (args.seed_set) opts.seed = args.seed;
        if (args.grid_set) opts.grid_steps = args.grid;
        if (args.tol_set) opts.nodal_tol = args.tol;

        const ogp::RunOutcome outcome = ogp::run(std::move(cfg), opts);
        if (!outcome.message.empty()) std::cerr << "error: " << outcome.message << "\n";
        for (const auto& artifact : outcome.artifacts) std::cout << "wrote " << artifact.string() << "\n";
        return outcome.exit_code;
    } catch (const ogp::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return ogp::exit_validation;
    } catch (const ogp::PhysicsError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return ogp::exit_validation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return ogp::exit_validation;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"off-diagonal geometric phases for pure and mixed quantum states"};
    app.require_subcommand(1);

    CommonArgs compute_args, scan_args, fig_args, intf_args, self_args;

    auto* compute = app.add_subcommand(
        "compute", "evaluate one phase (modes pure, mixed, degenerate, pseudopure-closed)");
    add_common(compute, compute_args, true);

    auto* scan = app.add_subcommand("scan", "sweep the nodal residuals over a parameter grid");
    add_common(scan, scan_args, true);

    auto* figure1 = app.add_subcommand("figure1", "emit the common-nodal-function table f(η, N)");
    add_common(figure1, fig_args, true);

    auto* interfere = app.add_subcommand("interfere", "simulate the two-particle interferometer");
    add_common(interfere, intf_args, true);

    auto* selftest = app.add_subcommand("selftest", "run the built-in verification suite");
    add_common(selftest, self_args, false);

    CLI11_PARSE(app, argc, argv);

    using ogp::RunMode;
    if (compute->parsed())
        return dispatch(compute_args, {RunMode::pure, RunMode::mixed, RunMode::degenerate,
                                       RunMode::pseudopure_closed});
    if (scan->parsed()) return dispatch(scan_args, {RunMode::nodal_scan});
    if (figure1->parsed()) return dispatch(fig_args, {RunMode::figure1});
    if (interfere->parsed()) return dispatch(intf_args, {RunMode::interfere});
    return dispatch(self_args, {RunMode::selftest});
}
