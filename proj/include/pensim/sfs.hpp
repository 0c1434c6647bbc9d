#pragma once

// Self-sufficiency conditions evaluated over a run-off ensemble.
//
// Benefit payment: fraction of paths that run out of money, cumulated over
// time. Funding ratio: fraction of paths below the threshold at each
// checkpoint, counted afresh every checkpoint. A path that has exhausted its
// assets has funding ratio 0 and so fails every later checkpoint.

#include <algorithm>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "pensim/error.hpp"
#include "pensim/regression.hpp"
#include "pensim/runoff.hpp"

namespace pensim {

enum class Cadence { annual, triennial };
enum class PassMode { per_checkpoint_max, ever_breach };

inline std::string to_string(Cadence c) { return c == Cadence::annual ? "annual" : "triennial"; }
inline std::string to_string(PassMode m) {
    return m == PassMode::per_checkpoint_max ? "per_checkpoint_max" : "ever_breach";
}

struct SfSSpec {
    double fr_threshold = 0.90;
    double confidence = 0.95;
    Cadence cadence = Cadence::annual;
    PassMode pass_mode = PassMode::per_checkpoint_max;

    double max_failure() const noexcept { return 1.0 - confidence; }

    void validate() const {
        if (!(fr_threshold > 0.0 && fr_threshold < 2.0)) throw DomainError("fr_threshold must be in (0, 2)");
        if (!(confidence > 0.0 && confidence < 1.0)) throw DomainError("confidence must be in (0, 1)");
    }
};

struct FailureCurve {
    std::vector<int> years;
    std::vector<double> fraction;
};

struct ConditionVerdict {
    bool benefit_payment_pass = false;
    bool funding_ratio_pass = false;
    double bp_failure_final = 0.0;
    double fr_failure_max = 0.0;
    double fr_ever_breach = 0.0;
};

// Years at which the funding ratio is tested: every year (or every third
// year) up to the last year with positive remaining liabilities.
inline std::vector<int> fr_checkpoints(const Ensemble& ensemble, Cadence cadence) {
    if (ensemble.paths.empty()) throw DomainError("ensemble is empty");
    const auto& fr = ensemble.paths.front().funding_ratio_by_year;
    const int step = cadence == Cadence::annual ? 1 : 3;
    std::vector<int> years;
    for (int t = step; t < static_cast<int>(fr.size()); t += step) {
        if (is_complete(fr[static_cast<std::size_t>(t)])) break;
        years.push_back(t);
    }
    return years;
}

// Last year whose remaining liabilities are positive, or 0 if none.
inline int last_positive_liability_year(const Ensemble& ensemble) {
    const auto years = fr_checkpoints(ensemble, Cadence::annual);
    return years.empty() ? 0 : years.back();
}

inline FailureCurve benefit_payment_failure_curve(const Ensemble& ensemble) {
    if (ensemble.paths.empty()) throw DomainError("ensemble is empty");
    const int horizon = ensemble.horizon();
    std::vector<int> exhausted_in(static_cast<std::size_t>(horizon) + 1, 0);
    for (const auto& p : ensemble.paths) {
        if (p.exhaustion_year) ++exhausted_in[static_cast<std::size_t>(*p.exhaustion_year)];
    }
    FailureCurve curve;
    const double n = static_cast<double>(ensemble.paths.size());
    int cumulative = 0;
    for (int t = 1; t <= horizon; ++t) {
        cumulative += exhausted_in[static_cast<std::size_t>(t)];
        curve.years.push_back(t);
        curve.fraction.push_back(cumulative / n);
    }
    return curve;
}

inline FailureCurve funding_ratio_failure_curve(const Ensemble& ensemble, const SfSSpec& spec) {
    spec.validate();
    FailureCurve curve;
    curve.years = fr_checkpoints(ensemble, spec.cadence);
    const double n = static_cast<double>(ensemble.paths.size());
    for (int t : curve.years) {
        int failing = 0;
        for (const auto& p : ensemble.paths) {
            if (p.funding_ratio_by_year[static_cast<std::size_t>(t)] < spec.fr_threshold) ++failing;
        }
        curve.fraction.push_back(failing / n);
    }
    return curve;
}

// Fraction of paths below the threshold at one or more checkpoints.
inline double funding_ratio_ever_breach(const Ensemble& ensemble, const SfSSpec& spec) {
    const auto years = fr_checkpoints(ensemble, spec.cadence);
    int breached = 0;
    for (const auto& p : ensemble.paths) {
        for (int t : years) {
            if (p.funding_ratio_by_year[static_cast<std::size_t>(t)] < spec.fr_threshold) {
                ++breached;
                break;
            }
        }
    }
    return breached / static_cast<double>(ensemble.paths.size());
}

inline ConditionVerdict evaluate_sfs(const Ensemble& ensemble, const SfSSpec& spec) {
    spec.validate();
    const auto bp = benefit_payment_failure_curve(ensemble);
    const auto fr = funding_ratio_failure_curve(ensemble, spec);

    ConditionVerdict v;
    v.bp_failure_final = bp.fraction.empty() ? 0.0 : bp.fraction.back();
    v.fr_failure_max = fr.fraction.empty() ? 0.0 : *std::max_element(fr.fraction.begin(), fr.fraction.end());
    v.fr_ever_breach = funding_ratio_ever_breach(ensemble, spec);
    v.benefit_payment_pass = v.bp_failure_final <= spec.max_failure();
    const double fr_stat = spec.pass_mode == PassMode::per_checkpoint_max ? v.fr_failure_max : v.fr_ever_breach;
    v.funding_ratio_pass = fr_stat <= spec.max_failure();
    return v;
}

enum class Condition { benefit_payment, funding_ratio, both };

inline std::string to_string(Condition c) {
    switch (c) {
    case Condition::benefit_payment: return "benefit_payment";
    case Condition::funding_ratio: return "funding_ratio";
    case Condition::both: return "both";
    }
    return "";
}

inline Condition parse_condition(const std::string& s) {
    if (s == "benefit_payment") return Condition::benefit_payment;
    if (s == "funding_ratio") return Condition::funding_ratio;
    if (s == "both") return Condition::both;
    throw DomainError("unknown condition '" + s + "'");
}

inline bool passes(const ConditionVerdict& v, Condition which) {
    switch (which) {
    case Condition::benefit_payment: return v.benefit_payment_pass;
    case Condition::funding_ratio: return v.funding_ratio_pass;
    case Condition::both: return v.benefit_payment_pass && v.funding_ratio_pass;
    }
    return false;
}

struct SolverOptions {
    int n_paths = 1000;
    std::uint64_t master_seed = 0;
    double tolerance = 0.5;  // GBP bn
    unsigned threads = 0;
};

struct SolveResult {
    Condition which = Condition::both;
    double required_assets = 0.0;
    ConditionVerdict verdict;
    int evaluations = 0;
};

// Verdict for base_config with initial_assets replaced; same seed every call.
inline ConditionVerdict verdict_at(const RunoffConfig& base_config, double initial_assets, const SfSSpec& spec,
                                   const SolverOptions& options) {
    RunoffConfig config = base_config;
    config.initial_assets = initial_assets;
    return evaluate_sfs(simulate_ensemble(config, options.n_paths, options.master_seed, options.threads), spec);
}

// Smallest initial assets passing `which`, by bisection under common random
// numbers. The result passes and lies within options.tolerance of the
// boundary.
inline SolveResult solve_required_assets(const RunoffConfig& base_config, const SfSSpec& spec, Condition which,
                                         double low, double high, const SolverOptions& options = {}) {
    if (!(low < high) || !(low >= 0.0)) throw BracketError("bracket must satisfy 0 <= low < high");
    if (!(options.tolerance > 0.0)) throw DomainError("solver tolerance must be > 0");

    SolveResult result;
    result.which = which;
    const auto at_low = verdict_at(base_config, low, spec, options);
    const auto at_high = verdict_at(base_config, high, spec, options);
    result.evaluations = 2;
    const bool pass_low = passes(at_low, which);
    const bool pass_high = passes(at_high, which);

    if (pass_low && !pass_high) {
        throw NonMonotoneError("condition passes at the low end of the bracket but fails at the high end");
    }
    if (pass_low == pass_high) {
        throw BracketError("bracket [" + std::to_string(low) + ", " + std::to_string(high) +
                           "] does not straddle the pass/fail boundary (" + (pass_low ? "both pass" : "both fail") +
                           ")");
    }

    ConditionVerdict best = at_high;
    while (high - low > options.tolerance) {
        const double mid = 0.5 * (low + high);
        const auto v = verdict_at(base_config, mid, spec, options);
        ++result.evaluations;
        if (passes(v, which)) {
            high = mid;
            best = v;
        } else {
            low = mid;
        }
    }
    result.required_assets = high;
    result.verdict = best;
    return result;
}

// R^2 between the funding ratio in each year and final assets, across paths.
inline std::map<int, double> fr_final_asset_correlation(const Ensemble& ensemble, std::span<const int> years) {
    if (ensemble.paths.size() < 30) throw DomainError("predictiveness needs at least 30 paths");
    const int last = last_positive_liability_year(ensemble);
    std::map<int, double> out;
    for (int y : years) {
        if (y < 0 || y > last) {
            throw DomainError("year " + std::to_string(y) + " has no funding ratio (last valued year is " +
                              std::to_string(last) + ")");
        }
        std::vector<Point> points;
        points.reserve(ensemble.paths.size());
        for (const auto& p : ensemble.paths) {
            points.push_back({p.funding_ratio_by_year[static_cast<std::size_t>(y)], p.final_assets});
        }
        out[y] = pearson_r_squared(points);
    }
    return out;
}

struct EscapeStatistic {
    int failing = 0;         // paths below the threshold at the year
    int paid_in_full = 0;    // of those, paths never exhausted
    double fraction() const noexcept { return failing == 0 ? 0.0 : static_cast<double>(paid_in_full) / failing; }
};

// Among paths failing the funding ratio test at `year`, how many still pay
// every benefit.
inline EscapeStatistic escape_statistic(const Ensemble& ensemble, const SfSSpec& spec, int year) {
    if (year < 0 || year > last_positive_liability_year(ensemble)) {
        throw DomainError("year " + std::to_string(year) + " has no funding ratio");
    }
    EscapeStatistic s;
    for (const auto& p : ensemble.paths) {
        if (p.funding_ratio_by_year[static_cast<std::size_t>(year)] < spec.fr_threshold) {
            ++s.failing;
            if (!p.exhausted) ++s.paid_in_full;
        }
    }
    return s;
}

} // namespace pensim
