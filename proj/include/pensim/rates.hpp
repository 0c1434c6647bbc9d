#pragma once

// Dual discount rates and contribution rates.
//
// Contribution rates are fractions of payroll internally (0.37 = 37%).

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "pensim/cashflow.hpp"
#include "pensim/error.hpp"

namespace pensim {

struct DualDiscountRate {
    DiscountRate pre_ret;
    DiscountRate post_ret;
    double pre_equity_fraction = 0.9;
    double post_equity_fraction = 0.1;
};

inline void check_weight(double weight_pre) {
    if (!(weight_pre >= 0.0 && weight_pre <= 1.0)) throw DomainError("pre-retirement weight must be in [0, 1]");
}

inline DiscountRate ddr_combine(const DualDiscountRate& ddr, double weight_pre) {
    check_weight(weight_pre);
    return DiscountRate(weight_pre * ddr.pre_ret.value() + (1.0 - weight_pre) * ddr.post_ret.value());
}

inline double effective_equity_allocation(double weight_pre, double pre_equity = 0.9, double post_equity = 0.1) {
    check_weight(weight_pre);
    return weight_pre * pre_equity + (1.0 - weight_pre) * post_equity;
}

inline void check_payroll(double payroll) {
    if (!(payroll > 0.0)) throw DomainError("payroll must be > 0");
}

inline double fsc_rate(const CashflowSchedule& accrual, DiscountRate fsc_dr, double payroll) {
    check_payroll(payroll);
    return present_value(accrual, fsc_dr) / payroll;
}

inline double drc_rate_naive(double deficit, int recovery_years, double payroll) {
    check_payroll(payroll);
    if (recovery_years < 1) throw DomainError("recovery period must be >= 1 year");
    return deficit / recovery_years / payroll;
}

// Level share p of a payroll growing at salary_growth such that
//   sum_{t=1..N} p * payroll * (1+g)^t / (1+dr)^t = deficit.
inline double drc_rate_amortized(double deficit, int recovery_years, double payroll, DiscountRate dr,
                                 double salary_growth) {
    check_payroll(payroll);
    if (recovery_years < 1) throw DomainError("recovery period must be >= 1 year");
    if (!(salary_growth > -1.0)) throw DomainError("salary growth must be > -1");
    if (deficit < 0.0) throw DomainError("no positive contribution repays a negative deficit");
    const double ratio = (1.0 + salary_growth) / (1.0 + dr.value());
    double annuity = 0.0;
    for (int t = 1; t <= recovery_years; ++t) annuity += std::pow(ratio, t);
    return deficit / (payroll * annuity);
}

struct ContributionBreakdown {
    double fsc = 0.0;
    double drc = 0.0;
    double total = 0.0;
    double annual_cost = 0.0;  // GBP bn
};

inline ContributionBreakdown contribution_breakdown(double fsc, double drc, double payroll) {
    if (fsc < 0.0 || drc < 0.0) throw DomainError("contribution rates must be >= 0");
    check_payroll(payroll);
    return {fsc, drc, fsc + drc, (fsc + drc) * payroll};
}

enum class DdrParam { pre_ret, post_ret };

inline std::string to_string(DdrParam p) { return p == DdrParam::pre_ret ? "pre_ret" : "post_ret"; }

inline DdrParam parse_ddr_param(const std::string& s) {
    if (s == "pre_ret") return DdrParam::pre_ret;
    if (s == "post_ret") return DdrParam::post_ret;
    throw DomainError("unknown DDR parameter '" + s + "'");
}

struct SensitivityRow {
    double delta_ppt = 0.0;
    double fsc = 0.0;
};

// FSC with one DDR component shifted by each delta (percentage points).
inline std::vector<SensitivityRow> fsc_sensitivity(const CashflowSchedule& accrual, const DualDiscountRate& ddr,
                                                   double weight_pre, double payroll, DdrParam param,
                                                   std::span<const double> deltas_ppt) {
    std::vector<SensitivityRow> rows;
    rows.reserve(deltas_ppt.size());
    for (double d : deltas_ppt) {
        DualDiscountRate shifted = ddr;
        if (param == DdrParam::pre_ret) {
            shifted.pre_ret = DiscountRate(ddr.pre_ret.value() + d / 100.0);
        } else {
            shifted.post_ret = DiscountRate(ddr.post_ret.value() + d / 100.0);
        }
        rows.push_back({d, fsc_rate(accrual, ddr_combine(shifted, weight_pre), payroll)});
    }
    return rows;
}

} // namespace pensim
