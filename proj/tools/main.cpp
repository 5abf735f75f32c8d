#include <cstdint>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "subnyq/cli_app.hpp"

int main(int argc, char** argv) {
    CLI::App app{"sub-Nyquist sparse channel estimation sweeps"};
    app.require_subcommand(1);

    subnyq::RunOptions run_opt;
    std::uint64_t seed = 0;
    int trials = 0;
    int workers = 0;
    CLI::App* run = app.add_subcommand("run", "run a Monte-Carlo sweep and write the CSV table");
    run->add_option("--config", run_opt.config_path, "experiment config file")->required();
    run->add_option("--out", run_opt.out_path, "output CSV path")->required();
    CLI::Option* seed_opt = run->add_option("--seed", seed, "override the master seed");
    CLI::Option* trials_opt = run->add_option("--trials", trials, "override the trial count");
    CLI::Option* workers_opt = run->add_option("--workers", workers, "OpenMP worker count");

    subnyq::PlotOptions plot_opt;
    const std::map<std::string, subnyq::PlotMetric> metric_names{
        {"recovery_prob", subnyq::PlotMetric::RecoveryProb},
        {"avg_mse", subnyq::PlotMetric::AvgMse},
    };
    CLI::App* plot = app.add_subcommand("plot", "render an SVG chart from a result CSV");
    plot->add_option("--csv", plot_opt.csv_path, "input CSV path")->required();
    plot->add_option("--out", plot_opt.out_path, "output SVG path")->required();
    plot->add_option("--metric", plot_opt.metric, "recovery_prob or avg_mse")
        ->required()
        ->transform(CLI::CheckedTransformer(metric_names, CLI::ignore_case));

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) {
        if (*seed_opt) run_opt.seed = seed;
        if (*trials_opt) run_opt.trials = trials;
        if (*workers_opt) run_opt.workers = workers;
        return subnyq::run_command(run_opt, std::cout, std::cerr);
    }
    return subnyq::plot_command(plot_opt, std::cout, std::cerr);
}
