// nhbrach: command-line front end.
//
//   nhbrach <compute|sweep|trajectory|verify|fig1|fig2|fig3>
//           [--config file] [--set key=value]... [--out file] [--tol x] [--jobs n]

#include "nhbrach/run.hpp"

#include <CLI11.hpp>

int main(int argc, char** argv) {
    CLI::App app{"Non-Hermitian two-level brachistochrone: passage times, trajectories, oracle checks"};
    app.set_version_flag("--version", "nhbrach 1.0");

    std::string command;
    std::string config_path;
    std::vector<std::string> settings;
    std::string out_path;
    std::optional<double> tol;
    unsigned jobs = 1;

    app.add_option("command", command, "compute, sweep, trajectory, verify, fig1, fig2 or fig3")
        ->required()
        ->check(CLI::IsMember({"compute", "sweep", "trajectory", "verify", "fig1", "fig2", "fig3"}));
    app.add_option("--config", config_path, "flat key = value file")->check(CLI::ExistingFile);
    app.add_option("--set", settings, "key=value override (repeatable)")->take_all()->allow_extra_args(false);
    app.add_option("--out", out_path, "CSV output path (default: stdout)");
    app.add_option("--tol", tol, "integrator tolerance")->check(CLI::PositiveNumber);
    app.add_option("--jobs", jobs, "max concurrent sweep cells")->check(CLI::Range(1u, 1024u));

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return nhbrach::exit_invalid;
    }

    nhbrach::RunConfig cfg;
    cfg.command = *nhbrach::parse_command(command);
    cfg.output_path = out_path;
    cfg.tol = tol;
    cfg.jobs = jobs;
    try {
        if (!config_path.empty()) nhbrach::read_config_file(cfg, config_path);
        for (const auto& kv : settings) nhbrach::apply_setting(cfg, kv);
    } catch (const nhbrach::error& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return nhbrach::exit_invalid;
    }
    return nhbrach::run(cfg);
}
