// pensim command-line entry point.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pensim/cli/commands.hpp"

int main(int argc, char** argv) {
    using namespace pensim::cli;

    CLI::App app{"Pension run-off simulation and self-sufficiency analytics"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    GlobalOptions g;
    std::uint64_t seed = 0;
    int paths = 0;
    unsigned threads = 0;
    std::string out, format;
    app.add_option("--config", g.config_path, "run config JSON")->check(CLI::ExistingFile);
    auto* seed_opt = app.add_option("--seed", seed, "master seed (overrides config)");
    auto* paths_opt = app.add_option("--paths", paths, "number of paths (overrides config)");
    auto* out_opt = app.add_option("--out", out, "output directory (overrides config)");
    auto* format_opt =
        app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    auto* threads_opt = app.add_option("--threads", threads, "worker threads, 0 = hardware");
    app.fallthrough();

    auto* simulate = app.add_subcommand("simulate", "simulate the run-off ensemble; write failure curves");

    SolveOptions solve;
    auto* sfs_solve = app.add_subcommand("sfs-solve", "solve for the smallest passing initial assets");
    sfs_solve->add_option("--condition", solve.condition, "benefit_payment, funding_ratio, both or all")
        ->check(CLI::IsMember({"benefit_payment", "funding_ratio", "both", "all"}));
    sfs_solve->add_option("--bracket", solve.bracket, "search bracket lo:hi in GBP bn");
    sfs_solve->add_option("--tolerance", solve.tolerance, "bisection tolerance in GBP bn");

    PredictivenessOptions pred;
    auto* predictiveness =
        app.add_subcommand("predictiveness", "R^2 between funding ratio and final assets by year");
    predictiveness->add_option("--years", pred.years, "years to test")->delimiter(',');

    auto* rates = app.add_subcommand("rates", "FSC sensitivity to a discount-rate component");

    std::string reliance_path;
    auto* metrics = app.add_subcommand("metrics", "Actual/Target Reliance statuses");
    metrics->add_option("inputs", reliance_path, "reliance inputs CSV or JSON")
        ->required()
        ->check(CLI::ExistingFile);

    std::string dataset_path;
    FitOptions fit_opts;
    auto* fit = app.add_subcommand("fit", "regress valuation data on gilt yield");
    fit->add_option("dataset", dataset_path, "valuations CSV")->required()->check(CLI::ExistingFile);
    fit->add_option("--y", fit_opts.y, "fsc, ln_tp, tp, sfs or assets")
        ->check(CLI::IsMember({"fsc", "ln_tp", "tp", "sfs", "assets"}));
    fit->add_option("--group-by", fit_opts.group_by, "regime,source or none");
    fit->add_option("--cpi", fit_opts.cpi_path, "CPI CSV (ln_tp only)");
    fit->add_option("--base-year", fit_opts.base_year, "CPI base year (ln_tp only)");

    ReportOptions report_opts;
    auto* report = app.add_subcommand("report", "run every analysis into one output directory");
    report->add_option("--valuations", report_opts.valuations_path, "valuations CSV")->check(CLI::ExistingFile);
    report->add_option("--reliance", report_opts.reliance_path, "reliance inputs")->check(CLI::ExistingFile);
    report->add_option("--bracket", report_opts.solve.bracket, "solver bracket lo:hi");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kValidation;
    }

    if (*seed_opt) g.seed = seed;
    if (*paths_opt) g.paths = paths;
    if (*out_opt) g.out = out;
    if (*format_opt) g.format = format;
    if (*threads_opt) g.threads = threads;

    if (*simulate) return cmd_simulate(g);
    if (*sfs_solve) return cmd_sfs_solve(g, solve);
    if (*predictiveness) return cmd_predictiveness(g, pred);
    if (*rates) return cmd_rates(g);
    if (*metrics) return cmd_metrics(g, reliance_path);
    if (*fit) return cmd_fit(g, dataset_path, fit_opts);
    if (*report) return cmd_report(g, report_opts);
    return kValidation;
}
