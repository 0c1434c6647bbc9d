#pragma once

// Subcommand implementations for the pensim tool. Each returns a process exit
// code: 0 ok, 2 validation, 3 data or I/O, 4 numerical.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "pensim/error.hpp"
#include "pensim/io/config.hpp"
#include "pensim/io/csv.hpp"
#include "pensim/io/datasets.hpp"
#include "pensim/io/svg.hpp"
#include "pensim/rates.hpp"
#include "pensim/regression.hpp"
#include "pensim/reliance.hpp"
#include "pensim/runoff.hpp"
#include "pensim/sfs.hpp"

namespace pensim::cli {

enum ExitCode : int { kOk = 0, kValidation = 2, kData = 3, kNumerical = 4 };

struct GlobalOptions {
    std::string config_path;  // empty: built-in defaults
    std::optional<std::uint64_t> seed;
    std::optional<int> paths;
    std::optional<std::string> out;
    std::optional<std::string> format;
    std::optional<unsigned> threads;
};

inline io::RunConfig resolve_config(const GlobalOptions& g) {
    io::RunConfig c = g.config_path.empty() ? io::RunConfig{} : io::load_run_config(g.config_path);
    if (g.seed) c.master_seed = *g.seed;
    if (g.paths) c.n_paths = *g.paths;
    if (g.out) c.output_dir = *g.out;
    if (g.format) c.format = io::parse_output_format(*g.format);
    if (g.threads) c.threads = *g.threads;
    c.validate();
    return c;
}

// Runs fn, mapping library exceptions onto exit codes.
inline int guarded(std::ostream& err, const std::function<int()>& fn) {
    try {
        return fn();
    } catch (const ValidationError& e) {
        err << "error: invalid config: " << e.what() << "\n";
        return kValidation;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return kValidation;
    } catch (const BracketError& e) {
        err << "error: bracketing failed: " << e.what() << "\n";
        return kNumerical;
    } catch (const NumericalError& e) {
        err << "error: numerical: " << e.what() << "\n";
        return kNumerical;
    } catch (const DataError& e) {
        err << "error: data: " << e.what() << "\n";
        return kData;
    } catch (const LookupError& e) {
        err << "error: data: " << e.what() << "\n";
        return kData;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: I/O: " << e.what() << "\n";
        return kData;
    } catch (const std::ios_base::failure& e) {
        err << "error: I/O: " << e.what() << "\n";
        return kData;
    }
}

namespace detail {

inline std::filesystem::path prepare_dir(const std::string& dir) {
    std::filesystem::path p(dir);
    std::filesystem::create_directories(p);
    return p;
}

// Table as JSON: array of row objects; numeric cells become numbers, blanks null.
inline nlohmann::json table_to_json(const io::CsvTable& t) {
    auto rows = nlohmann::json::array();
    for (const auto& row : t.rows) {
        nlohmann::json o = nlohmann::json::object();
        for (std::size_t i = 0; i < t.header.size(); ++i) {
            const auto& cell = row[i];
            if (cell.empty()) {
                o[t.header[i]] = nullptr;
                continue;
            }
            double v = 0.0;
            auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (res.ec == std::errc{} && res.ptr == cell.data() + cell.size()) {
                o[t.header[i]] = v;
            } else {
                o[t.header[i]] = cell;
            }
        }
        rows.push_back(std::move(o));
    }
    return rows;
}

inline std::filesystem::path write_table(const std::filesystem::path& dir, const std::string& stem,
                                         const io::CsvTable& t, io::OutputFormat format) {
    if (format == io::OutputFormat::csv) {
        auto p = dir / (stem + ".csv");
        io::write_csv(p.string(), t);
        return p;
    }
    auto p = dir / (stem + ".json");
    io::write_file(p.string(), table_to_json(t).dump(2) + "\n");
    return p;
}

inline std::string pct(double fraction) { return io::format_number(fraction * 100.0); }

} // namespace detail

struct SimulateOutputs {
    std::filesystem::path curves;
    std::filesystem::path paths;
    std::filesystem::path plot;
    ConditionVerdict verdict;
};

inline io::CsvTable failure_curve_table(const Ensemble& ensemble, const SfSSpec& spec) {
    const auto bp = benefit_payment_failure_curve(ensemble);
    const auto fr = funding_ratio_failure_curve(ensemble, spec);
    io::CsvTable t{{"year", "bp_failure", "fr_failure"}, {}};
    std::size_t k = 0;
    for (std::size_t i = 0; i < bp.years.size(); ++i) {
        std::string fr_cell;
        if (k < fr.years.size() && fr.years[k] == bp.years[i]) fr_cell = io::format_number(fr.fraction[k++]);
        t.rows.push_back({std::to_string(bp.years[i]), io::format_number(bp.fraction[i]), fr_cell});
    }
    return t;
}

inline io::CsvTable path_summary_table(const Ensemble& ensemble) {
    io::CsvTable t{{"path_index", "exhausted", "exhaustion_year", "final_assets_gbp_bn", "min_funding_ratio"}, {}};
    for (std::size_t i = 0; i < ensemble.paths.size(); ++i) {
        const auto& p = ensemble.paths[i];
        double min_fr = std::numeric_limits<double>::quiet_NaN();
        for (double fr : p.funding_ratio_by_year) {
            if (!is_complete(fr) && !(min_fr <= fr)) min_fr = fr;
        }
        t.rows.push_back({std::to_string(i), p.exhausted ? "1" : "0",
                          p.exhaustion_year ? std::to_string(*p.exhaustion_year) : "",
                          io::format_number(p.final_assets), io::format_number(min_fr)});
    }
    return t;
}

inline io::Chart failure_curve_chart(const Ensemble& ensemble, const SfSSpec& spec, const std::string& title) {
    const auto bp = benefit_payment_failure_curve(ensemble);
    const auto fr = funding_ratio_failure_curve(ensemble, spec);
    io::Chart chart{title, "year", "failure probability (%)", {}};
    io::Series b{"benefit payment", {}, {}};
    for (std::size_t i = 0; i < bp.years.size(); ++i) {
        b.x.push_back(bp.years[i]);
        b.y.push_back(100.0 * bp.fraction[i]);
    }
    io::Series f{"funding ratio < " + io::format_number(100.0 * spec.fr_threshold) + "%", {}, {}};
    for (std::size_t i = 0; i < fr.years.size(); ++i) {
        f.x.push_back(fr.years[i]);
        f.y.push_back(100.0 * fr.fraction[i]);
    }
    io::Series limit{"limit", {0.0, static_cast<double>(ensemble.horizon())},
                     {100.0 * spec.max_failure(), 100.0 * spec.max_failure()}};
    chart.series = {b, f, limit};
    return chart;
}

inline SimulateOutputs run_simulate(const io::RunConfig& c) {
    const auto dir = detail::prepare_dir(c.output_dir);
    const auto ensemble = simulate_ensemble(c.runoff(), c.n_paths, c.master_seed, c.threads);
    SimulateOutputs o;
    o.verdict = evaluate_sfs(ensemble, c.sfs);
    o.curves = detail::write_table(dir, "failure_curves", failure_curve_table(ensemble, c.sfs), c.format);
    o.paths = detail::write_table(dir, "path_summary", path_summary_table(ensemble), c.format);
    o.plot = dir / "failure_curves.svg";
    const std::string title = "Run-off failure curves, " + io::format_number(100.0 * c.equity_fraction) +
                              "% equities, initial assets " + io::format_number(c.initial_assets);
    io::write_file(o.plot.string(), io::render_svg(failure_curve_chart(ensemble, c.sfs, title)));
    return o;
}

inline int cmd_simulate(const GlobalOptions& g, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    return guarded(err, [&] {
        const auto c = resolve_config(g);
        const auto o = run_simulate(c);
        out << "benefit payment failure (final): " << io::format_fixed(100.0 * o.verdict.bp_failure_final, 2)
            << "% " << (o.verdict.benefit_payment_pass ? "PASS" : "FAIL") << "\n"
            << "funding ratio failure (max):     " << io::format_fixed(100.0 * o.verdict.fr_failure_max, 2) << "% "
            << (o.verdict.funding_ratio_pass ? "PASS" : "FAIL") << "\n"
            << "wrote " << o.curves.string() << ", " << o.paths.string() << ", " << o.plot.string() << "\n";
        return kOk;
    });
}

struct SolveOptions {
    std::string condition = "all";  // benefit_payment | funding_ratio | both | all
    std::string bracket = "0:300";
    double tolerance = 0.5;
};

inline std::pair<double, double> parse_bracket(const std::string& s) {
    const auto colon = s.find(':');
    if (colon == std::string::npos) throw DomainError("bracket must look like lo:hi, got '" + s + "'");
    try {
        return {io::parse_number(s.substr(0, colon)), io::parse_number(s.substr(colon + 1))};
    } catch (const DataError&) {
        throw DomainError("bracket must look like lo:hi, got '" + s + "'");
    }
}

inline std::vector<SolveResult> run_sfs_solve(const io::RunConfig& c, const SolveOptions& s) {
    const auto [lo, hi] = parse_bracket(s.bracket);
    std::vector<Condition> which;
    if (s.condition == "all") {
        which = {Condition::benefit_payment, Condition::funding_ratio};
    } else {
        which = {parse_condition(s.condition)};
    }
    SolverOptions opts{c.n_paths, c.master_seed, s.tolerance, c.threads};
    const auto base = c.runoff();
    std::vector<SolveResult> results;
    for (auto w : which) results.push_back(solve_required_assets(base, c.sfs, w, lo, hi, opts));
    return results;
}

inline io::CsvTable solve_table(const std::vector<SolveResult>& results) {
    io::CsvTable t{{"which_condition", "required_assets_gbp_bn", "bp_failure_final", "fr_failure_max",
                    "fr_ever_breach"},
                   {}};
    for (const auto& r : results) {
        t.rows.push_back({to_string(r.which), io::format_number(r.required_assets),
                          io::format_number(r.verdict.bp_failure_final), io::format_number(r.verdict.fr_failure_max),
                          io::format_number(r.verdict.fr_ever_breach)});
    }
    return t;
}

inline int cmd_sfs_solve(const GlobalOptions& g, const SolveOptions& s, std::ostream& out = std::cout,
                         std::ostream& err = std::cerr) {
    return guarded(err, [&] {
        const auto c = resolve_config(g);
        const auto results = run_sfs_solve(c, s);
        const auto dir = detail::prepare_dir(c.output_dir);
        const auto path = detail::write_table(dir, "sfs_solve", solve_table(results), c.format);
        for (const auto& r : results) {
            out << to_string(r.which) << ": required initial assets " << io::format_fixed(r.required_assets, 2)
                << " (" << r.evaluations << " evaluations)\n";
        }
        out << "wrote " << path.string() << "\n";
        return kOk;
    });
}

struct PredictivenessOptions {
    std::vector<int> years{3, 6, 9, 18, 30, 63};
};

inline io::CsvTable predictiveness_table(const Ensemble& ensemble, const SfSSpec& spec, std::vector<int> years) {
    const int last = last_positive_liability_year(ensemble);
    std::erase_if(years, [&](int y) { return y > last; });
    const auto r2 = fr_final_asset_correlation(ensemble, years);
    io::CsvTable t{{"year", "r_squared", "fr_failing", "escape_fraction"}, {}};
    for (int y : years) {
        const auto esc = escape_statistic(ensemble, spec, y);
        t.rows.push_back({std::to_string(y), io::format_number(r2.at(y)), std::to_string(esc.failing),
                          esc.failing ? io::format_number(esc.fraction()) : ""});
    }
    return t;
}

inline int cmd_predictiveness(const GlobalOptions& g, const PredictivenessOptions& p, std::ostream& out = std::cout,
                              std::ostream& err = std::cerr) {
    return guarded(err, [&] {
        const auto c = resolve_config(g);
        const auto ensemble = simulate_ensemble(c.runoff(), c.n_paths, c.master_seed, c.threads);
        const auto table = predictiveness_table(ensemble, c.sfs, p.years);
        const auto dir = detail::prepare_dir(c.output_dir);
        const auto path = detail::write_table(dir, "predictiveness", table, c.format);
        for (const auto& row : table.rows) out << "year " << row[0] << ": R^2 " << row[1] << "\n";
        out << "wrote " << path.string() << "\n";
        return kOk;
    });
}

inline io::CsvTable rates_table(const io::RunConfig& c) {
    const auto rows = fsc_sensitivity(c.accrual_schedule(), c.ddr(), c.rates.fsc_weight_pre, c.payroll,
                                      c.rates.sensitivity_param, c.rates.deltas_ppt);
    io::CsvTable t{{"delta_ppt", "fsc_pct"}, {}};
    for (const auto& r : rows) t.rows.push_back({io::format_number(r.delta_ppt), detail::pct(r.fsc)});
    return t;
}

inline int cmd_rates(const GlobalOptions& g, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    return guarded(err, [&] {
        const auto c = resolve_config(g);
        const auto table = rates_table(c);
        const auto combined = ddr_combine(c.ddr(), c.rates.fsc_weight_pre);
        out << "combined DR " << io::format_fixed(combined.percent(), 3) << "%, effective equity allocation "
            << io::format_fixed(100.0 * effective_equity_allocation(c.rates.fsc_weight_pre), 1) << "%\n";
        const auto dir = detail::prepare_dir(c.output_dir);
        const auto path = detail::write_table(dir, "rates_sensitivity", table, c.format);
        out << "wrote " << path.string() << "\n";
        return kOk;
    });
}

inline io::CsvTable metrics_table(const std::vector<io::LabelledReliance>& inputs) {
    io::CsvTable t{{"label", "actual_reliance_gbp_bn", "target_reliance_gbp_bn", "limit_of_reliance_gbp_bn",
                    "tp_surplus_gbp_bn", "sfs_surplus_gbp_bn", "rag_actual", "rag_target", "tp_green_lower_gbp_bn",
                    "tp_red_upper_gbp_bn", "simultaneous_assets_upper_gbp_bn", "transition_risk_unusual"},
                   {}};
    for (const auto& [label, in] : inputs) {
        const auto bounds = tp_liability_bounds(in.sfs_liabilities, in.transition_risk, in.affrc);
        t.rows.push_back({label, io::format_number(actual_reliance(in)), io::format_number(target_reliance(in)),
                          io::format_number(limit_of_reliance(in.affrc)),
                          io::format_number(in.assets - in.tp_liabilities),
                          io::format_number(in.assets - in.sfs_liabilities), rag_actual(in).label(),
                          rag_target(in).label(), io::format_number(bounds.green_lower),
                          io::format_number(bounds.red_upper), io::format_number(simultaneous_assets_upper(in)),
                          in.transition_risk_unusual() ? "1" : "0"});
    }
    return t;
}

inline int cmd_metrics(const GlobalOptions& g, const std::string& inputs_path, std::ostream& out = std::cout,
                       std::ostream& err = std::cerr) {
    return guarded(err, [&] {
        const auto c = resolve_config(g);
        const auto inputs = io::load_reliance_inputs(inputs_path);
        const auto table = metrics_table(inputs);
        for (const auto& row : table.rows) {
            out << row[0] << ": actual " << row[6] << ", target " << row[7] << "\n";
        }
        const auto dir = detail::prepare_dir(c.output_dir);
        const auto path = detail::write_table(dir, "metrics", table, c.format);
        out << "wrote " << path.string() << "\n";
        return kOk;
    });
}

struct FitOptions {
    std::string y = "fsc";           // fsc | ln_tp | tp | sfs | assets
    std::string group_by = "regime,source";  // or "none"
    std::string cpi_path;            // ln_tp only
    int base_year = 2023;
    std::optional<std::string> source;
};

struct FitGroup {
    std::string regime;
    std::string source;
    std::vector<ValuationRecord> records;
};

inline std::vector<FitGroup> group_records(const std::vector<ValuationRecord>& records, const FitOptions& f) {
    std::vector<FitGroup> groups;
    const bool pooled = f.group_by == "none";
    if (!pooled && f.group_by != "regime,source") {
        throw DomainError("--group-by must be 'regime,source' or 'none'");
    }
    for (const auto& r : records) {
        if (f.source && r.source != *f.source) continue;
        const std::string regime = pooled ? "all" : to_string(r.benefits_regime);
        const std::string source = pooled ? "all" : r.source;
        auto it = std::find_if(groups.begin(), groups.end(),
                               [&](const FitGroup& g) { return g.regime == regime && g.source == source; });
        if (it == groups.end()) {
            groups.push_back({regime, source, {}});
            it = groups.end() - 1;
        }
        it->records.push_back(r);
    }
    std::sort(groups.begin(), groups.end(), [](const FitGroup& a, const FitGroup& b) {
        return std::tie(a.regime, a.source) < std::tie(b.regime, b.source);
    });
    return groups;
}

struct FitRun {
    io::CsvTable table;
    io::Chart chart;
    std::vector<std::string> warnings;
};

inline FitRun run_fit(const std::vector<ValuationRecord>& records, const FitOptions& f) {
    const bool ln_tp = f.y == "ln_tp";
    std::optional<CpiIndex> cpi;
    if (ln_tp) {
        if (f.cpi_path.empty()) throw DomainError("--y ln_tp needs --cpi");
        cpi = io::cpi_from_table(io::read_csv(f.cpi_path));
    }
    const YField field = ln_tp ? YField::tp_liabilities : parse_y_field(f.y);
    const std::string y_name = ln_tp ? "ln_tp_liabilities_real" : to_string(field);

    FitRun run;
    run.table = {{"y_field", "benefits_regime", "source", "n", "slope", "intercept", "r_squared"}, {}};
    run.chart = {"Valuation data against gilt yield", "gilt yield (%)", y_name, {}};
    for (const auto& g : group_records(records, f)) {
        const std::string name = g.regime + "/" + g.source;
        std::vector<Point> points;
        for (const auto& r : g.records) {
            auto y = field_value(r, field);
            if (!y) continue;
            const double v = ln_tp ? std::log(cpi_adjust(*y, r.year(), f.base_year, *cpi)) : *y;
            points.push_back({r.gilt_yield_pct, v});
        }
        if (points.size() < 2) {
            run.warnings.push_back("skipping group " + name + ": fewer than 2 points");
            continue;
        }
        FitResult fit;
        try {
            fit = ln_tp ? ln_tp_fit(g.records, *cpi, f.base_year) : ols_fit(points);
        } catch (const NumericalError& e) {
            run.warnings.push_back("skipping group " + name + ": " + e.what());
            continue;
        }
        run.table.rows.push_back({y_name, g.regime, g.source, std::to_string(fit.n), io::format_number(fit.slope),
                                  io::format_number(fit.intercept), io::format_number(fit.r_squared)});
        io::Series s{name, {}, {}, io::SeriesStyle::scatter};
        double lo = points.front().x, hi = lo;
        for (const auto& p : points) {
            s.x.push_back(p.x);
            s.y.push_back(p.y);
            lo = std::min(lo, p.x);
            hi = std::max(hi, p.x);
        }
        run.chart.series.push_back(std::move(s));
        run.chart.series.push_back({name + " fit (R^2 " + io::format_fixed(fit.r_squared, 3) + ")",
                                    {lo, hi},
                                    {fit.intercept + fit.slope * lo, fit.intercept + fit.slope * hi}});
    }
    return run;
}

inline int cmd_fit(const GlobalOptions& g, const std::string& dataset_path, const FitOptions& f,
                   std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    return guarded(err, [&] {
        const auto c = resolve_config(g);
        const auto run = run_fit(io::load_valuations(dataset_path), f);
        for (const auto& w : run.warnings) err << "warning: " << w << "\n";
        for (const auto& row : run.table.rows) {
            out << row[1] << "/" << row[2] << ": y = " << row[4] << " x + " << row[5] << ", R^2 " << row[6] << "\n";
        }
        const auto dir = detail::prepare_dir(c.output_dir);
        const auto path = detail::write_table(dir, "fit", run.table, c.format);
        const auto plot = dir / "fit.svg";
        io::write_file(plot.string(), io::render_svg(run.chart));
        out << "wrote " << path.string() << ", " << plot.string() << "\n";
        return kOk;
    });
}

struct ReportOptions {
    std::string valuations_path;
    std::string reliance_path;
    SolveOptions solve;
};

// Everything in one directory: simulation curves, solver, predictiveness,
// rates table, plus fits and metrics when datasets are given.
inline int cmd_report(const GlobalOptions& g, const ReportOptions& r, std::ostream& out = std::cout,
                      std::ostream& err = std::cerr) {
    return guarded(err, [&] {
        const auto c = resolve_config(g);
        const auto dir = detail::prepare_dir(c.output_dir);
        std::string summary;

        const auto sim = run_simulate(c);
        summary += "bp_failure_final," + io::format_number(sim.verdict.bp_failure_final) + "\n";
        summary += "fr_failure_max," + io::format_number(sim.verdict.fr_failure_max) + "\n";

        const auto ensemble = simulate_ensemble(c.runoff(), c.n_paths, c.master_seed, c.threads);
        detail::write_table(dir, "predictiveness", predictiveness_table(ensemble, c.sfs, {3, 6, 9, 18, 30, 63}),
                            c.format);
        detail::write_table(dir, "rates_sensitivity", rates_table(c), c.format);

        try {
            const auto solved = run_sfs_solve(c, r.solve);
            detail::write_table(dir, "sfs_solve", solve_table(solved), c.format);
            for (const auto& s : solved) {
                summary += "required_assets_" + to_string(s.which) + "," + io::format_number(s.required_assets) + "\n";
            }
        } catch (const NumericalError& e) {
            err << "warning: solver skipped: " << e.what() << "\n";
            summary += "solver,skipped\n";
        }

        if (!r.valuations_path.empty()) {
            const auto run = run_fit(io::load_valuations(r.valuations_path), FitOptions{});
            for (const auto& w : run.warnings) err << "warning: " << w << "\n";
            detail::write_table(dir, "fit", run.table, c.format);
            io::write_file((dir / "fit.svg").string(), io::render_svg(run.chart));
        }
        if (!r.reliance_path.empty()) {
            detail::write_table(dir, "metrics", metrics_table(io::load_reliance_inputs(r.reliance_path)), c.format);
        }
        io::write_file((dir / "summary.csv").string(), "key,value\n" + summary);
        out << summary << "wrote report to " << dir.string() << "\n";
        return kOk;
    });
}

} // namespace pensim::cli
