#pragma once

// Projected benefit cashflows and their present values.
//
// Timing convention: amounts[t-1] is the benefit due in year t (t = 1..H).
// Valuation discounts it by t whole years. The run-off simulator pays it at
// the start of year t, before that year's investment return is applied.
// All money is in GBP billions.

#include <algorithm>
#include <cmath>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "pensim/error.hpp"

namespace pensim {

class DiscountRate {
public:
    constexpr DiscountRate() = default;

    // Fraction, e.g. -0.0075 for -0.75%.
    explicit DiscountRate(double annual) : value_(annual) {
        if (!(annual > -1.0) || !std::isfinite(annual)) {
            throw DomainError("discount rate must be finite and > -1, got " + std::to_string(annual));
        }
    }

    static DiscountRate from_percent(double pct) { return DiscountRate(pct / 100.0); }

    constexpr double value() const noexcept { return value_; }
    constexpr double percent() const noexcept { return value_ * 100.0; }

    friend constexpr bool operator==(DiscountRate, DiscountRate) = default;

private:
    double value_ = 0.0;
};

class CashflowSchedule {
public:
    CashflowSchedule() = default;

    explicit CashflowSchedule(std::vector<double> amounts) : amounts_(std::move(amounts)) {
        if (amounts_.empty()) {
            throw DomainError("cashflow schedule needs a horizon of at least one year");
        }
        for (std::size_t i = 0; i < amounts_.size(); ++i) {
            if (!(amounts_[i] >= 0.0) || !std::isfinite(amounts_[i])) {
                throw DomainError("cashflow amount for year " + std::to_string(i + 1) +
                                  " must be finite and >= 0");
            }
        }
    }

    int horizon() const noexcept { return static_cast<int>(amounts_.size()); }

    // Amount due in year t, 1-based.
    double at(int year) const {
        if (year < 1 || year > horizon()) {
            throw DomainError("year " + std::to_string(year) + " outside schedule horizon");
        }
        return amounts_[static_cast<std::size_t>(year - 1)];
    }

    std::span<const double> amounts() const noexcept { return amounts_; }

    double total() const noexcept {
        double sum = 0.0;
        for (double a : amounts_) sum += a;
        return sum;
    }

private:
    std::vector<double> amounts_;
};

// Present value at year `asof` of the cashflows strictly after `asof`.
inline double remaining_liabilities(const CashflowSchedule& schedule, int asof, DiscountRate rate) {
    if (asof < 0 || asof > schedule.horizon()) {
        throw DomainError("as-of year " + std::to_string(asof) + " outside [0, " +
                          std::to_string(schedule.horizon()) + "]");
    }
    const double growth = 1.0 + rate.value();
    const auto amounts = schedule.amounts();
    double pv = 0.0;
    for (int t = asof + 1; t <= schedule.horizon(); ++t) {
        pv += amounts[static_cast<std::size_t>(t - 1)] / std::pow(growth, t - asof);
    }
    return pv;
}

inline double present_value(const CashflowSchedule& schedule, DiscountRate rate) {
    return remaining_liabilities(schedule, 0, rate);
}

// Remaining liabilities for every year 0..H. Entry H is 0.
inline std::vector<double> remaining_liabilities_curve(const CashflowSchedule& schedule, DiscountRate rate) {
    std::vector<double> curve(static_cast<std::size_t>(schedule.horizon()) + 1, 0.0);
    for (int t = 0; t < schedule.horizon(); ++t) {
        curve[static_cast<std::size_t>(t)] = remaining_liabilities(schedule, t, rate);
    }
    return curve;
}

struct FlatShape {};
struct LinearDecayShape {};

// Rises linearly from start_fraction * peak at year 1 to the peak at
// peak_year, then falls linearly to zero at the horizon.
struct ArmadilloShape {
    int peak_year = 15;
    double start_fraction = 0.5;
};

using ScheduleShape = std::variant<FlatShape, LinearDecayShape, ArmadilloShape>;

inline std::string shape_name(const ScheduleShape& shape) {
    struct Visitor {
        std::string operator()(FlatShape) const { return "flat"; }
        std::string operator()(LinearDecayShape) const { return "linear_decay"; }
        std::string operator()(ArmadilloShape) const { return "armadillo"; }
    };
    return std::visit(Visitor{}, shape);
}

namespace detail {

inline std::vector<double> shape_weights(int horizon, const ScheduleShape& shape) {
    std::vector<double> w(static_cast<std::size_t>(horizon));
    if (std::holds_alternative<FlatShape>(shape)) {
        std::fill(w.begin(), w.end(), 1.0);
    } else if (std::holds_alternative<LinearDecayShape>(shape)) {
        if (horizon < 2) throw DomainError("linear_decay needs a horizon of at least 2 years");
        for (int t = 1; t <= horizon; ++t) w[static_cast<std::size_t>(t - 1)] = horizon - t;
    } else {
        const auto& a = std::get<ArmadilloShape>(shape);
        if (a.peak_year < 1 || a.peak_year > horizon) {
            throw DomainError("armadillo peak_year " + std::to_string(a.peak_year) + " outside horizon");
        }
        if (!(a.start_fraction > 0.0 && a.start_fraction <= 1.0)) {
            throw DomainError("armadillo start_fraction must be in (0, 1]");
        }
        for (int t = 1; t <= horizon; ++t) {
            double v;
            if (t <= a.peak_year) {
                v = a.peak_year == 1 ? 1.0
                                     : a.start_fraction + (1.0 - a.start_fraction) * (t - 1) / (a.peak_year - 1);
            } else {
                v = static_cast<double>(horizon - t) / (horizon - a.peak_year);
            }
            w[static_cast<std::size_t>(t - 1)] = v;
        }
    }
    return w;
}

} // namespace detail

// Schedule of the given shape scaled so its present value at `rate` is total_pv.
inline CashflowSchedule make_synthetic_schedule(double total_pv, DiscountRate rate, int horizon,
                                                const ScheduleShape& shape) {
    if (!(total_pv > 0.0)) throw DomainError("total_pv must be > 0");
    if (horizon < 1) throw DomainError("horizon must be >= 1");
    auto weights = detail::shape_weights(horizon, shape);
    const double unit_pv = present_value(CashflowSchedule(weights), rate);
    if (!(unit_pv > 0.0)) throw DomainError("shape has zero present value");
    const double scale = total_pv / unit_pv;
    for (double& w : weights) w *= scale;
    return CashflowSchedule(std::move(weights));
}

class CpiIndex {
public:
    CpiIndex() = default;

    explicit CpiIndex(std::map<int, double> levels) : levels_(std::move(levels)) {
        for (const auto& [year, level] : levels_) {
            if (!(level > 0.0) || !std::isfinite(level)) {
                throw DomainError("CPI level for " + std::to_string(year) + " must be > 0");
            }
        }
    }

    double level(int year) const {
        auto it = levels_.find(year);
        if (it == levels_.end()) throw LookupError("CPI index has no entry for year " + std::to_string(year));
        return it->second;
    }

    bool contains(int year) const { return levels_.contains(year); }
    const std::map<int, double>& levels() const noexcept { return levels_; }

private:
    std::map<int, double> levels_;
};

inline double cpi_adjust(double value, int from_year, int to_year, const CpiIndex& index) {
    const double from = index.level(from_year);
    const double to = index.level(to_year);
    if (from_year == to_year) return value;
    return value * to / from;
}

} // namespace pensim
