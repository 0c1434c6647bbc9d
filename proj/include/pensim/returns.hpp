#pragma once

// Annual equity/bond returns drawn from a bivariate distribution.
//
// Each (master_seed, path_index, year) triple maps to one Philox block, so a
// path's returns never depend on which thread simulated it or in what order.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <utility>

#include "pensim/error.hpp"
#include "pensim/philox.hpp"

namespace pensim {

enum class ReturnDistribution { normal, lognormal };

inline std::string to_string(ReturnDistribution d) {
    return d == ReturnDistribution::normal ? "normal" : "lognormal";
}

// Annual arithmetic means and standard deviations, as fractions.
struct ReturnModel {
    double equity_mean = 0.045;
    double equity_sd = 0.175;
    double bond_mean = -0.010;
    double bond_sd = 0.020;
    double cross_correlation = 0.0;
    ReturnDistribution distribution = ReturnDistribution::normal;

    void validate() const {
        if (!(equity_sd >= 0.0) || !(bond_sd >= 0.0)) throw DomainError("return standard deviations must be >= 0");
        if (!(std::abs(cross_correlation) <= 1.0)) throw DomainError("cross_correlation must be in [-1, 1]");
        if (!std::isfinite(equity_mean) || !std::isfinite(bond_mean)) throw DomainError("return means must be finite");
        if (distribution == ReturnDistribution::lognormal && (equity_mean <= -1.0 || bond_mean <= -1.0)) {
            throw DomainError("lognormal returns need means > -100%");
        }
    }
};

class PortfolioWeights {
public:
    constexpr PortfolioWeights() = default;

    explicit PortfolioWeights(double equity_fraction) : equity_(equity_fraction) {
        if (!(equity_fraction >= 0.0 && equity_fraction <= 1.0)) {
            throw DomainError("equity_fraction must be in [0, 1]");
        }
    }

    constexpr double equity() const noexcept { return equity_; }
    constexpr double bond() const noexcept { return 1.0 - equity_; }

private:
    double equity_ = 0.0;
};

struct SeedSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t path_index = 0;

    friend constexpr bool operator==(const SeedSpec&, const SeedSpec&) = default;
};

struct YearReturns {
    double equity = 0.0;
    double bond = 0.0;
};

inline constexpr double kReturnFloor = -0.999;

// Annual rebalancing: the portfolio return is the weighted sum each year.
constexpr double portfolio_return(double r_equity, double r_bond, PortfolioWeights weights) {
    return weights.equity() * r_equity + weights.bond() * r_bond;
}

// Two independent standard normals for (seed, year) via Box-Muller.
inline std::pair<double, double> standard_normal_pair(const SeedSpec& seed, int year) {
    const PhiloxCounter ctr{static_cast<std::uint32_t>(seed.path_index),
                            static_cast<std::uint32_t>(seed.path_index >> 32),
                            static_cast<std::uint32_t>(year), 0u};
    const PhiloxKey key{static_cast<std::uint32_t>(seed.master_seed),
                        static_cast<std::uint32_t>(seed.master_seed >> 32)};
    const auto out = philox4x32_10(ctr, key);
    const double u1 = to_unit_open(out[0], out[1]);
    const double u2 = to_unit_open(out[2], out[3]);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

namespace detail {

// Arithmetic mean/sd of 1+R matched by a lognormal.
inline double lognormal_return(double mean, double sd, double z) {
    const double gross = 1.0 + mean;
    const double sigma2 = std::log1p((sd * sd) / (gross * gross));
    return std::exp(std::log(gross) - 0.5 * sigma2 + std::sqrt(sigma2) * z) - 1.0;
}

inline YearReturns raw_year_returns(const ReturnModel& model, const SeedSpec& seed, int year) {
    const auto [z1, z2] = standard_normal_pair(seed, year);
    const double rho = model.cross_correlation;
    const double zb = rho * z1 + std::sqrt(std::max(0.0, 1.0 - rho * rho)) * z2;
    if (model.distribution == ReturnDistribution::normal) {
        return {model.equity_mean + model.equity_sd * z1, model.bond_mean + model.bond_sd * zb};
    }
    return {lognormal_return(model.equity_mean, model.equity_sd, z1),
            lognormal_return(model.bond_mean, model.bond_sd, zb)};
}

} // namespace detail

// Deterministic in (model, seed, year); each component floored at -99.9%.
inline YearReturns sample_year_returns(const ReturnModel& model, const SeedSpec& seed, int year) {
    auto r = detail::raw_year_returns(model, seed, year);
    r.equity = std::max(r.equity, kReturnFloor);
    r.bond = std::max(r.bond, kReturnFloor);
    return r;
}

// True when the unfloored draw falls below the floor.
inline bool floor_binds(const ReturnModel& model, const SeedSpec& seed, int year) {
    const auto r = detail::raw_year_returns(model, seed, year);
    return r.equity < kReturnFloor || r.bond < kReturnFloor;
}

} // namespace pensim
