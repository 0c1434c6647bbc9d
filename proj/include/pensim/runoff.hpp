#pragma once

// Run-off of a closed scheme: benefits paid from assets and investment
// returns, optionally topped up by employer covenant support.
//
// Each simulated year t = 1..H:
//   1. add covenant inflow (annual_stream mode, t <= duration)
//   2. pay the year's benefit; a negative balance marks exhaustion
//   3. apply the portfolio return
// Funding ratio at year t is assets_t over the remaining liabilities at t.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <thread>
#include <vector>

#include "pensim/cashflow.hpp"
#include "pensim/error.hpp"
#include "pensim/returns.hpp"

namespace pensim {

enum class CovenantMode { upfront_npv, annual_stream };

struct CovenantSupport {
    double payroll = 10.0;             // GBP bn per year
    double fraction_of_payroll = 0.10;
    int duration = 30;                 // years
    CovenantMode mode = CovenantMode::annual_stream;
    DiscountRate npv_rate{};           // upfront_npv only

    double annual_amount() const noexcept { return payroll * fraction_of_payroll; }

    // Present value of the stream at npv_rate, paid at the end of years 1..duration.
    double upfront_value() const {
        if (duration == 0 || annual_amount() == 0.0) return 0.0;
        return present_value(CashflowSchedule(std::vector<double>(static_cast<std::size_t>(duration), annual_amount())),
                             npv_rate);
    }

    double inflow(int year) const noexcept {
        return mode == CovenantMode::annual_stream && year <= duration ? annual_amount() : 0.0;
    }

    void validate() const {
        if (!(fraction_of_payroll >= 0.0)) throw DomainError("covenant fraction_of_payroll must be >= 0");
        if (duration < 0) throw DomainError("covenant duration must be >= 0");
        if (!(payroll >= 0.0)) throw DomainError("payroll must be >= 0");
    }
};

struct RunoffConfig {
    double initial_assets = 100.0;
    CashflowSchedule schedule;
    PortfolioWeights weights;
    ReturnModel model;
    std::optional<CovenantSupport> covenant;
    DiscountRate sfs_rate_for_fr = DiscountRate(-0.0075);

    void validate() const {
        if (!(initial_assets >= 0.0) || !std::isfinite(initial_assets)) {
            throw DomainError("initial_assets must be finite and >= 0");
        }
        if (schedule.horizon() < 1) throw DomainError("run-off config has no cashflow schedule");
        model.validate();
        if (covenant) covenant->validate();
    }

    double starting_assets() const {
        double assets = initial_assets;
        if (covenant && covenant->mode == CovenantMode::upfront_npv) assets += covenant->upfront_value();
        return assets;
    }
};

// Funding-ratio sentinel for years with no liabilities left to value.
inline constexpr double kFundingComplete = std::numeric_limits<double>::quiet_NaN();

inline bool is_complete(double funding_ratio) noexcept { return std::isnan(funding_ratio); }

struct PathResult {
    std::vector<double> assets_by_year;         // index 0 = start, length H+1
    std::vector<double> funding_ratio_by_year;  // kFundingComplete where liabilities are 0
    bool exhausted = false;
    std::optional<int> exhaustion_year;
    double final_assets = 0.0;

    friend bool operator==(const PathResult& a, const PathResult& b) {
        auto same = [](const std::vector<double>& x, const std::vector<double>& y) {
            if (x.size() != y.size()) return false;
            for (std::size_t i = 0; i < x.size(); ++i) {
                if (std::isnan(x[i]) != std::isnan(y[i])) return false;
                if (!std::isnan(x[i]) && x[i] != y[i]) return false;
            }
            return true;
        };
        return same(a.assets_by_year, b.assets_by_year) &&
               same(a.funding_ratio_by_year, b.funding_ratio_by_year) && a.exhausted == b.exhausted &&
               a.exhaustion_year == b.exhaustion_year && a.final_assets == b.final_assets;
    }
};

struct Ensemble {
    std::vector<PathResult> paths;
    RunoffConfig config;
    std::uint64_t master_seed = 0;
    int n_paths = 0;

    int horizon() const noexcept { return config.schedule.horizon(); }
};

constexpr SeedSpec derive_seed(std::uint64_t master_seed, std::uint64_t path_index) noexcept {
    return SeedSpec{master_seed, path_index};
}

namespace detail {

inline PathResult simulate_path(const RunoffConfig& config, const SeedSpec& seed,
                                const std::vector<double>& liabilities) {
    const int horizon = config.schedule.horizon();
    const auto amounts = config.schedule.amounts();

    PathResult path;
    path.assets_by_year.resize(static_cast<std::size_t>(horizon) + 1);
    path.funding_ratio_by_year.resize(static_cast<std::size_t>(horizon) + 1);

    double assets = config.starting_assets();
    path.assets_by_year[0] = assets;
    path.funding_ratio_by_year[0] = liabilities[0] > 0.0 ? assets / liabilities[0] : kFundingComplete;

    for (int t = 1; t <= horizon; ++t) {
        const auto i = static_cast<std::size_t>(t);
        if (!path.exhausted) {
            if (config.covenant) assets += config.covenant->inflow(t);
            assets -= amounts[i - 1];
            if (assets < 0.0) {
                path.exhausted = true;
                path.exhaustion_year = t;
                assets = 0.0;
            } else {
                const auto r = sample_year_returns(config.model, seed, t);
                assets *= 1.0 + portfolio_return(r.equity, r.bond, config.weights);
            }
        }
        path.assets_by_year[i] = assets;
        path.funding_ratio_by_year[i] = liabilities[i] > 0.0 ? assets / liabilities[i] : kFundingComplete;
    }
    path.final_assets = assets;
    return path;
}

} // namespace detail

inline PathResult simulate_path(const RunoffConfig& config, const SeedSpec& seed) {
    config.validate();
    return detail::simulate_path(config, seed, remaining_liabilities_curve(config.schedule, config.sfs_rate_for_fr));
}

// Paths are split into contiguous blocks across `threads` workers; the result
// is bit-identical for any thread count.
inline Ensemble simulate_ensemble(const RunoffConfig& config, int n_paths, std::uint64_t master_seed,
                                  unsigned threads = 0) {
    if (n_paths < 1) throw DomainError("n_paths must be >= 1");
    config.validate();
    const auto liabilities = remaining_liabilities_curve(config.schedule, config.sfs_rate_for_fr);

    Ensemble ensemble;
    ensemble.config = config;
    ensemble.master_seed = master_seed;
    ensemble.n_paths = n_paths;
    ensemble.paths.resize(static_cast<std::size_t>(n_paths));

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(n_paths));

    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            ensemble.paths[i] = detail::simulate_path(config, derive_seed(master_seed, i), liabilities);
        }
    };

    if (threads == 1) {
        work(0, ensemble.paths.size());
        return ensemble;
    }
    std::vector<std::jthread> pool;
    const std::size_t n = ensemble.paths.size();
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back(work, n * w / threads, n * (w + 1) / threads);
    }
    pool.clear();
    return ensemble;
}

} // namespace pensim
