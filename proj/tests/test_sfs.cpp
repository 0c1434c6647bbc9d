#include <gtest/gtest.h>

#include <algorithm>
#include <array>

#include "pensim/sfs.hpp"

using namespace pensim;

namespace {

ReturnModel still() {
    ReturnModel m;
    m.equity_mean = m.bond_mean = 0.0;
    m.equity_sd = m.bond_sd = 0.0;
    return m;
}

RunoffConfig deterministic(double initial) {
    RunoffConfig c;
    c.initial_assets = initial;
    c.schedule = CashflowSchedule(std::vector<double>(5, 10.0));
    c.model = still();
    c.sfs_rate_for_fr = DiscountRate(0.0);
    return c;
}

RunoffConfig bonds90(double initial) {
    RunoffConfig c;
    c.initial_assets = initial;
    c.schedule = make_synthetic_schedule(100, DiscountRate(-0.0075), 65, ArmadilloShape{});
    c.weights = PortfolioWeights(0.1);
    return c;
}

// Hand-built ensemble: each path is (assets by year) with liabilities fixed at 1.
Ensemble hand_ensemble(const std::vector<std::vector<double>>& frs, const std::vector<std::optional<int>>& exhaust) {
    Ensemble e;
    e.config.schedule = CashflowSchedule(std::vector<double>(frs.front().size() - 1, 1.0));
    for (std::size_t i = 0; i < frs.size(); ++i) {
        PathResult p;
        p.funding_ratio_by_year = frs[i];
        p.funding_ratio_by_year.back() = kFundingComplete;
        p.assets_by_year = frs[i];
        p.exhaustion_year = exhaust[i];
        p.exhausted = exhaust[i].has_value();
        p.final_assets = p.exhausted ? 0.0 : frs[i].back();
        e.paths.push_back(p);
    }
    e.n_paths = static_cast<int>(frs.size());
    return e;
}

} // namespace

TEST(FailureCurves, AllSurvive) {
    const auto e = simulate_ensemble(deterministic(60), 10, 0);
    const auto bp = benefit_payment_failure_curve(e);
    EXPECT_EQ(bp.years.size(), 5u);
    for (double f : bp.fraction) EXPECT_EQ(f, 0.0);
    const auto v = evaluate_sfs(e, {});
    EXPECT_TRUE(v.benefit_payment_pass);
    EXPECT_EQ(v.bp_failure_final, 0.0);
}

TEST(FailureCurves, AllFailAtYearFive) {
    const auto e = simulate_ensemble(deterministic(40), 10, 0);
    const auto bp = benefit_payment_failure_curve(e);
    for (std::size_t i = 0; i < bp.years.size(); ++i) EXPECT_EQ(bp.fraction[i], bp.years[i] < 5 ? 0.0 : 1.0);
}

TEST(FailureCurves, Bonds90NoCovenantFinalFailure) {
    // expected band from the worked example; currently measured at about 0.23, see README
    const auto curve = benefit_payment_failure_curve(simulate_ensemble(bonds90(100), 1000, 2018));
    EXPECT_GE(curve.fraction.back(), 0.02);
    EXPECT_LE(curve.fraction.back(), 0.15);
}

TEST(FailureCurves, FundingRatioConstantOne) {
    const std::vector<double> fr(11, 1.0);
    const auto e = hand_ensemble({fr, fr, fr}, {std::nullopt, std::nullopt, std::nullopt});
    const auto c = funding_ratio_failure_curve(e, {});
    EXPECT_EQ(c.years.size(), 9u);  // 1..9, year 10 complete
    for (double f : c.fraction) EXPECT_EQ(f, 0.0);
}

TEST(FailureCurves, ExhaustedAtYearOneFailsEveryCheckpoint) {
    std::vector<double> fr(11, 0.0);
    fr[0] = 1.0;
    const auto e = hand_ensemble({fr, fr}, {1, 1});
    for (double f : funding_ratio_failure_curve(e, {}).fraction) EXPECT_EQ(f, 1.0);
    for (double f : benefit_payment_failure_curve(e).fraction) EXPECT_EQ(f, 1.0);
}

TEST(FailureCurves, TriennialCadence) {
    const auto e = simulate_ensemble(bonds90(100), 50, 1);
    const auto annual = funding_ratio_failure_curve(e, {});
    SfSSpec tri;
    tri.cadence = Cadence::triennial;
    const auto c = funding_ratio_failure_curve(e, tri);
    ASSERT_FALSE(c.years.empty());
    EXPECT_EQ(c.years.front(), 3);
    for (std::size_t i = 0; i < c.years.size(); ++i) {
        EXPECT_EQ(c.years[i] % 3, 0);
        EXPECT_EQ(c.fraction[i], annual.fraction[static_cast<std::size_t>(c.years[i] - 1)]);
    }
    EXPECT_EQ(last_positive_liability_year(e), 63);
}

TEST(EvaluateSfs, TenPercentExhaustFailsBenefitPayment) {
    std::vector<std::vector<double>> frs(10, std::vector<double>(6, 1.0));
    std::vector<std::optional<int>> ex(10);
    frs[0] = {1.0, 0.0, 0.0, 0.0, 0.0, 0.0};
    ex[0] = 1;
    const auto v = evaluate_sfs(hand_ensemble(frs, ex), {});
    EXPECT_DOUBLE_EQ(v.bp_failure_final, 0.1);
    EXPECT_FALSE(v.benefit_payment_pass);
}

TEST(EvaluateSfs, PassModesDiffer) {
    // each path dips below 90% once, at different years: per-checkpoint max 1/4, ever-breach 1
    std::vector<std::vector<double>> frs(4, std::vector<double>(6, 1.0));
    for (std::size_t i = 0; i < 4; ++i) frs[i][i + 1] = 0.5;
    const auto e = hand_ensemble(frs, std::vector<std::optional<int>>(4));
    SfSSpec spec;
    spec.confidence = 0.5;
    auto v = evaluate_sfs(e, spec);
    EXPECT_DOUBLE_EQ(v.fr_failure_max, 0.25);
    EXPECT_DOUBLE_EQ(v.fr_ever_breach, 1.0);
    EXPECT_TRUE(v.funding_ratio_pass);
    spec.pass_mode = PassMode::ever_breach;
    v = evaluate_sfs(e, spec);
    EXPECT_FALSE(v.funding_ratio_pass);
}

TEST(EvaluateSfs, CurvesConsistentWithVerdict) {
    const auto e = simulate_ensemble(bonds90(100), 500, 2018);
    const SfSSpec spec;
    const auto bp = benefit_payment_failure_curve(e);
    const auto fr = funding_ratio_failure_curve(e, spec);
    EXPECT_TRUE(std::is_sorted(bp.fraction.begin(), bp.fraction.end()));
    for (double f : fr.fraction) {
        EXPECT_GE(f, 0.0);
        EXPECT_LE(f, 1.0);
    }
    const auto v = evaluate_sfs(e, spec);
    EXPECT_EQ(v.bp_failure_final, bp.fraction.back());
    EXPECT_EQ(v.fr_failure_max, *std::max_element(fr.fraction.begin(), fr.fraction.end()));
    EXPECT_GE(v.fr_ever_breach, v.fr_failure_max);
}

// At the last valued year, a failing path is either exhausted or a survivor
// below threshold, so FR failure minus BP failure counts exactly those survivors.
TEST(EvaluateSfs, AsymptoteIdentity) {
    const SfSSpec spec;
    int checked = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto e = simulate_ensemble(bonds90(100), 300, seed);
        const int last = last_positive_liability_year(e);
        const auto bp = benefit_payment_failure_curve(e);
        const auto fr = funding_ratio_failure_curve(e, spec);
        int survivors_below = 0;
        for (const auto& p : e.paths) {
            const bool alive = !p.exhaustion_year || *p.exhaustion_year > last;
            if (alive && p.funding_ratio_by_year[static_cast<std::size_t>(last)] < spec.fr_threshold) {
                ++survivors_below;
            }
        }
        const double bp_at_last = bp.fraction[static_cast<std::size_t>(last - 1)];
        EXPECT_NEAR(fr.fraction.back() - bp_at_last, survivors_below / 300.0, 1e-15);
        if (survivors_below == 0) {
            EXPECT_EQ(fr.fraction.back(), bp_at_last);
            ++checked;
        }
    }
    EXPECT_GT(checked, 0);
}

TEST(Solver, DeterministicBoundary) {
    const auto r = solve_required_assets(deterministic(0), {}, Condition::benefit_payment, 10, 100, {50, 0, 0.5, 1});
    EXPECT_NEAR(r.required_assets, 50.0, 0.5);
    EXPECT_GE(r.required_assets, 50.0);
    EXPECT_TRUE(r.verdict.benefit_payment_pass);
}

TEST(Solver, BracketErrors) {
    EXPECT_THROW(solve_required_assets(deterministic(0), {}, Condition::benefit_payment, 60, 100, {20}),
                 BracketError);
    EXPECT_THROW(solve_required_assets(deterministic(0), {}, Condition::benefit_payment, 10, 20, {20}), BracketError);
    EXPECT_THROW(solve_required_assets(deterministic(0), {}, Condition::benefit_payment, 50, 10, {20}), BracketError);
}

TEST(Solver, ResultPassesAndJustBelowFails) {
    SolverOptions opts{300, 7, 0.5, 0};
    const auto base = bonds90(100);
    const auto r = solve_required_assets(base, {}, Condition::funding_ratio, 50, 250, opts);
    EXPECT_TRUE(r.verdict.funding_ratio_pass);
    EXPECT_FALSE(passes(verdict_at(base, r.required_assets - 0.5, {}, opts), Condition::funding_ratio));
}

TEST(Solver, PassIndicatorMonotoneUnderCommonRandomNumbers) {
    SolverOptions opts{300, 11, 0.5, 0};
    auto base = bonds90(0);
    base.weights = PortfolioWeights(0.6);
    base.covenant = CovenantSupport{};
    for (auto which : {Condition::benefit_payment, Condition::funding_ratio, Condition::both}) {
        bool passed = false;
        for (double a : {40.0, 70.0, 100.0, 130.0, 160.0}) {
            const bool now = passes(verdict_at(base, a, {}, opts), which);
            if (passed) { EXPECT_TRUE(now) << to_string(which) << " at " << a; }
            passed = now;
        }
    }
}

TEST(Predictiveness, IdenticalPathsAreUndefined) {
    const auto e = simulate_ensemble(deterministic(60), 40, 0);
    const std::array<int, 1> years{2};
    EXPECT_THROW(fr_final_asset_correlation(e, years), UndefinedRSquaredError);
}

TEST(Predictiveness, RejectsSmallEnsemblesAndUnvaluedYears) {
    const auto small = simulate_ensemble(bonds90(100), 20, 0);
    const std::array<int, 1> y3{3};
    EXPECT_THROW(fr_final_asset_correlation(small, y3), DomainError);
    const auto e = simulate_ensemble(bonds90(100), 40, 0);
    const std::array<int, 1> y64{64};
    EXPECT_THROW(fr_final_asset_correlation(e, y64), DomainError);
}

TEST(Predictiveness, RisesTowardsTheEnd) {
    const auto e = simulate_ensemble(bonds90(100), 1000, 2018);
    const std::array<int, 6> years{3, 6, 9, 18, 30, 63};
    const auto r2 = fr_final_asset_correlation(e, years);
    for (std::size_t i = 1; i < years.size(); ++i) EXPECT_LT(r2.at(years[i - 1]), r2.at(years[i]));
    EXPECT_LE(r2.at(3), 0.35);
    EXPECT_GE(r2.at(63), 0.95);
}

TEST(Escape, CountsSurvivorsAmongFailing) {
    std::vector<std::vector<double>> frs(4, std::vector<double>(6, 1.0));
    std::vector<std::optional<int>> ex(4);
    frs[0][3] = 0.5;                       // fails, pays in full
    frs[1][3] = 0.5;                       // fails, pays in full
    frs[2] = {1.0, 0.5, 0.0, 0.0, 0.0, 0.0};  // fails, exhausted
    ex[2] = 2;
    const auto s = escape_statistic(hand_ensemble(frs, ex), {}, 3);
    EXPECT_EQ(s.failing, 3);
    EXPECT_EQ(s.paid_in_full, 2);
    EXPECT_DOUBLE_EQ(s.fraction(), 2.0 / 3.0);
}

TEST(Conditions, ParseRoundTrip) {
    for (auto c : {Condition::benefit_payment, Condition::funding_ratio, Condition::both}) {
        EXPECT_EQ(parse_condition(to_string(c)), c);
    }
    EXPECT_THROW(parse_condition("neither"), DomainError);
    SfSSpec bad;
    bad.confidence = 1.0;
    EXPECT_THROW(bad.validate(), DomainError);
}
