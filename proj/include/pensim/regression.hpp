#pragma once

// Simple least-squares fits and the gilt-yield correlation analyses.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "pensim/cashflow.hpp"
#include "pensim/error.hpp"

namespace pensim {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    int n = 0;
};

// Ordinary least squares y = slope * x + intercept.
//
// R^2 = 1 - SS_res / SS_tot. When y has no variance the line fits exactly
// and R^2 is reported as 1.
inline FitResult ols_fit(std::span<const Point> points) {
    const auto n = points.size();
    if (n < 2) throw NumericalError("ols_fit needs at least 2 points, got " + std::to_string(n));

    double mx = 0.0, my = 0.0;
    for (const auto& p : points) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw DataError("ols_fit received a non-finite point");
        mx += p.x;
        my += p.y;
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);

    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& p : points) {
        const double dx = p.x - mx, dy = p.y - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) throw NumericalError("ols_fit: all x values are equal");

    FitResult fit;
    fit.n = static_cast<int>(n);
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    if (syy == 0.0) {
        fit.r_squared = 1.0;
    } else {
        double ss_res = 0.0;
        for (const auto& p : points) {
            const double e = p.y - (fit.intercept + fit.slope * p.x);
            ss_res += e * e;
        }
        fit.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
    }
    return fit;
}

// Squared Pearson correlation; throws when either variable is constant.
inline double pearson_r_squared(std::span<const Point> points) {
    if (points.size() < 2) throw UndefinedRSquaredError("need at least 2 points for a correlation");
    double mx = 0.0, my = 0.0;
    for (const auto& p : points) {
        mx += p.x;
        my += p.y;
    }
    mx /= static_cast<double>(points.size());
    my /= static_cast<double>(points.size());
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (const auto& p : points) {
        sxx += (p.x - mx) * (p.x - mx);
        syy += (p.y - my) * (p.y - my);
        sxy += (p.x - mx) * (p.y - my);
    }
    if (sxx == 0.0 || syy == 0.0) throw UndefinedRSquaredError("R^2 undefined: a variable has zero variance");
    return (sxy * sxy) / (sxx * syy);
}

enum class BenefitsRegime { pre2022, post2022 };

inline std::string to_string(BenefitsRegime r) { return r == BenefitsRegime::pre2022 ? "pre2022" : "post2022"; }

inline BenefitsRegime parse_benefits_regime(const std::string& s) {
    if (s == "pre2022") return BenefitsRegime::pre2022;
    if (s == "post2022") return BenefitsRegime::post2022;
    throw DataError("unknown benefits_regime '" + s + "'");
}

struct ValuationRecord {
    std::string date;  // ISO yyyy-mm-dd
    std::string label;
    std::string source;  // e.g. "valuation", "monitoring"
    BenefitsRegime benefits_regime = BenefitsRegime::pre2022;
    double gilt_yield_pct = 0.0;
    std::optional<double> fsc_pct;
    std::optional<double> tp_liabilities_gbp_bn;
    std::optional<double> sfs_liabilities_gbp_bn;
    std::optional<double> assets_gbp_bn;
    std::string provenance;

    int year() const {
        if (date.size() < 4) throw DataError("record '" + label + "' has no parsable date");
        return std::stoi(date.substr(0, 4));
    }

    void validate() const {
        if (!(gilt_yield_pct > -2.0 && gilt_yield_pct < 20.0)) {
            throw DataError("gilt_yield_pct out of range (-2, 20) for '" + label + "'");
        }
        for (const auto* v : {&fsc_pct, &tp_liabilities_gbp_bn, &sfs_liabilities_gbp_bn, &assets_gbp_bn}) {
            if (*v && !std::isfinite(**v)) throw DataError("non-finite value in '" + label + "'");
        }
    }
};

// Fit of ln(CPI-adjusted TP liabilities) against gilt yield (percent).
inline FitResult ln_tp_fit(std::span<const ValuationRecord> records, const CpiIndex& cpi, int base_year) {
    std::vector<Point> points;
    for (const auto& r : records) {
        if (!r.tp_liabilities_gbp_bn) continue;
        const double tp = *r.tp_liabilities_gbp_bn;
        if (!(tp > 0.0)) throw DomainError("TP liabilities must be > 0 for ln fit ('" + r.label + "')");
        points.push_back({r.gilt_yield_pct, std::log(cpi_adjust(tp, r.year(), base_year, cpi))});
    }
    if (points.size() < 2) throw NumericalError("ln_tp_fit needs at least 2 records with TP liabilities");
    return ols_fit(points);
}

enum class YField { fsc, tp_liabilities, sfs_liabilities, assets };

inline std::string to_string(YField f) {
    switch (f) {
    case YField::fsc: return "fsc_pct";
    case YField::tp_liabilities: return "tp_liabilities_gbp_bn";
    case YField::sfs_liabilities: return "sfs_liabilities_gbp_bn";
    case YField::assets: return "assets_gbp_bn";
    }
    return "";
}

inline YField parse_y_field(const std::string& s) {
    if (s == "fsc" || s == "fsc_pct") return YField::fsc;
    if (s == "tp" || s == "tp_liabilities_gbp_bn") return YField::tp_liabilities;
    if (s == "sfs" || s == "sfs_liabilities_gbp_bn") return YField::sfs_liabilities;
    if (s == "assets" || s == "assets_gbp_bn") return YField::assets;
    throw DataError("unknown y field '" + s + "'");
}

inline std::optional<double> field_value(const ValuationRecord& r, YField f) {
    switch (f) {
    case YField::fsc: return r.fsc_pct;
    case YField::tp_liabilities: return r.tp_liabilities_gbp_bn;
    case YField::sfs_liabilities: return r.sfs_liabilities_gbp_bn;
    case YField::assets: return r.assets_gbp_bn;
    }
    return std::nullopt;
}

struct RecordFilter {
    std::optional<std::string> source;
    std::optional<BenefitsRegime> benefits_regime;
    std::optional<std::string> date_from;  // inclusive, ISO string compare
    std::optional<std::string> date_to;

    bool accepts(const ValuationRecord& r) const {
        if (source && r.source != *source) return false;
        if (benefits_regime && r.benefits_regime != *benefits_regime) return false;
        if (date_from && r.date < *date_from) return false;
        if (date_to && r.date > *date_to) return false;
        return true;
    }
};

struct CorrelationRow {
    YField y_field = YField::fsc;
    BenefitsRegime benefits_regime = BenefitsRegime::pre2022;
    std::string source;
    FitResult fit;
};

struct CorrelationReport {
    std::vector<CorrelationRow> rows;
    std::vector<std::string> warnings;
};

// One fit of y_field against gilt yield per (benefits_regime, source) group.
inline CorrelationReport correlation_report(std::span<const ValuationRecord> records, YField y_field,
                                            const RecordFilter& filter = {}) {
    std::map<std::pair<BenefitsRegime, std::string>, std::vector<Point>> groups;
    for (const auto& r : records) {
        if (!filter.accepts(r)) continue;
        auto y = field_value(r, y_field);
        if (!y) continue;
        groups[{r.benefits_regime, r.source}].push_back({r.gilt_yield_pct, *y});
    }

    CorrelationReport report;
    for (const auto& [key, points] : groups) {
        const std::string name = to_string(key.first) + "/" + key.second;
        if (points.size() < 2) {
            report.warnings.push_back("skipping group " + name + ": fewer than 2 points");
            continue;
        }
        try {
            report.rows.push_back({y_field, key.first, key.second, ols_fit(points)});
        } catch (const NumericalError& e) {
            report.warnings.push_back("skipping group " + name + ": " + e.what());
        }
    }
    return report;
}

} // namespace pensim
