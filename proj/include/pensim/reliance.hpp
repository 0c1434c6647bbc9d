#pragma once

// Affordable Risk Capacity and the Actual/Target Reliance metrics.
//
//   R_act = L_sfs - (A - T_risk)
//   R_tar = L_sfs - (L_tp - T_risk)
//
// Actual Reliance is Green when R_act <= R_tar (equivalently A >= L_tp) and
// Red when R_act >= 150% AffRC. The two tests are independent, so both can
// hold at once. Target Reliance is Green at or below 95% AffRC and Red at or
// above 105% AffRC. Boundaries are inclusive; Amber is the open remainder.

#include <string>
#include <vector>

#include "pensim/cashflow.hpp"
#include "pensim/error.hpp"

namespace pensim {

inline constexpr double kLimitOfRelianceMultiple = 1.5;
inline constexpr double kTargetGreenMultiple = 0.95;
inline constexpr double kTargetRedMultiple = 1.05;

struct AffordableRiskCapacity {
    double central = 0.0;
    double low = 0.0;   // 95% of central
    double high = 0.0;  // 105% of central
};

inline AffordableRiskCapacity affordable_risk_capacity(double payroll, DiscountRate dr, double fraction = 0.10,
                                                       int years = 30) {
    if (!(payroll > 0.0)) throw DomainError("payroll must be > 0");
    if (years < 1) throw DomainError("AffRC needs at least one year of support");
    if (!(fraction >= 0.0)) throw DomainError("AffRC fraction must be >= 0");
    const double central =
        fraction == 0.0
            ? 0.0
            : present_value(CashflowSchedule(std::vector<double>(static_cast<std::size_t>(years), fraction * payroll)),
                            dr);
    return {central, kTargetGreenMultiple * central, kTargetRedMultiple * central};
}

struct RelianceInputs {
    double assets = 0.0;
    double tp_liabilities = 0.0;
    double sfs_liabilities = 0.0;
    double transition_risk = 0.0;
    double affrc = 0.0;

    void validate() const {
        for (double v : {assets, tp_liabilities, sfs_liabilities, transition_risk, affrc}) {
            if (!(v >= 0.0)) throw DomainError("reliance inputs must be finite and >= 0");
        }
    }

    // Outside [0, 20] is implausible for a transition cost (typically 6-8).
    bool transition_risk_unusual() const noexcept { return transition_risk < 0.0 || transition_risk > 20.0; }
};

enum class Rag { Green, Amber, Red };

inline std::string to_string(Rag r) {
    switch (r) {
    case Rag::Green: return "Green";
    case Rag::Amber: return "Amber";
    case Rag::Red: return "Red";
    }
    return "";
}

struct RagStatus {
    Rag color = Rag::Amber;
    // Actual Reliance only: Green and Red conditions hold together. color is
    // then Green.
    bool simultaneous = false;

    std::string label() const { return simultaneous ? "Green+Red" : to_string(color); }
    friend bool operator==(const RagStatus&, const RagStatus&) = default;
};

inline double actual_reliance(const RelianceInputs& in) {
    return in.sfs_liabilities - (in.assets - in.transition_risk);
}

inline double target_reliance(const RelianceInputs& in) {
    return in.sfs_liabilities - (in.tp_liabilities - in.transition_risk);
}

inline double limit_of_reliance(double affrc) { return kLimitOfRelianceMultiple * affrc; }

// Green: TP surplus A - L_tp >= 0.
inline bool actual_green(const RelianceInputs& in) { return in.assets - in.tp_liabilities >= 0.0; }

// Red: SfS surplus A - L_sfs <= -(1.5 AffRC - T_risk).
inline bool actual_red(const RelianceInputs& in) {
    return in.assets - in.sfs_liabilities <= -(limit_of_reliance(in.affrc) - in.transition_risk);
}

inline RagStatus rag_actual(const RelianceInputs& in) {
    const bool green = actual_green(in);
    const bool red = actual_red(in);
    if (green) return {Rag::Green, red};
    return {red ? Rag::Red : Rag::Amber, false};
}

inline RagStatus rag_target(const RelianceInputs& in) {
    const double r = target_reliance(in);
    if (r <= kTargetGreenMultiple * in.affrc) return {Rag::Green, false};
    if (r >= kTargetRedMultiple * in.affrc) return {Rag::Red, false};
    return {Rag::Amber, false};
}

struct TpBounds {
    double green_lower = 0.0;  // Target Reliance Green iff L_tp >= green_lower
    double red_upper = 0.0;    // Target Reliance Red iff L_tp <= red_upper
};

inline TpBounds tp_liability_bounds(double sfs_liabilities, double transition_risk, double affrc) {
    const double base = sfs_liabilities + transition_risk;
    return {base - kTargetGreenMultiple * affrc, base - kTargetRedMultiple * affrc};
}

// Upper end of the asset range giving simultaneous Green and Red Actual
// Reliance; the range is [L_tp, this], empty when below L_tp.
inline double simultaneous_assets_upper(const RelianceInputs& in) {
    return in.sfs_liabilities - (limit_of_reliance(in.affrc) - in.transition_risk);
}

} // namespace pensim
