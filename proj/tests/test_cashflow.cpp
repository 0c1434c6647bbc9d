#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "pensim/cashflow.hpp"

using namespace pensim;

namespace {

CashflowSchedule flat(double amount, int years) {
    return CashflowSchedule(std::vector<double>(static_cast<std::size_t>(years), amount));
}

} // namespace

TEST(DiscountRate, RejectsMinusOneAndBelow) {
    EXPECT_THROW(DiscountRate(-1.0), DomainError);
    EXPECT_THROW(DiscountRate(-1.5), DomainError);
    EXPECT_THROW(DiscountRate(std::nan("")), DomainError);
    EXPECT_DOUBLE_EQ(DiscountRate::from_percent(-0.75).value(), -0.0075);
}

TEST(CashflowSchedule, Invariants) {
    EXPECT_THROW(CashflowSchedule(std::vector<double>{}), DomainError);
    EXPECT_THROW(CashflowSchedule(std::vector<double>{1.0, -0.1}), DomainError);
    const auto s = flat(10, 5);
    EXPECT_EQ(s.horizon(), 5);
    EXPECT_EQ(s.at(1), 10.0);
    EXPECT_THROW(s.at(0), DomainError);
    EXPECT_THROW(s.at(6), DomainError);
}

TEST(PresentValue, FlatAtZeroRate) { EXPECT_DOUBLE_EQ(present_value(flat(10, 5), DiscountRate(0.0)), 50.0); }

TEST(PresentValue, SingleTerm) {
    EXPECT_NEAR(present_value(CashflowSchedule({100.0}), DiscountRate(0.10)), 90.9091, 1e-4);
}

TEST(PresentValue, MatchesHighPrecisionOracle) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> amt(0.0, 5.0), rate(-0.05, 0.08);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> a(1 + rng() % 80);
        for (auto& x : a) x = amt(rng);
        const double r = rate(rng);
        const double expected = oracle::present_value(a, r);
        EXPECT_NEAR(present_value(CashflowSchedule(a), DiscountRate(r)), expected, 1e-12 * std::abs(expected) + 1e-14);
    }
}

TEST(PresentValue, StrictlyDecreasingInRate) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> amt(0.0, 3.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> a(1 + rng() % 40);
        for (auto& x : a) x = amt(rng);
        a[rng() % a.size()] = 1.0;  // at least one positive amount
        const CashflowSchedule s(a);
        double prev = present_value(s, DiscountRate(-0.05));
        for (double r = -0.04; r <= 0.10; r += 0.01) {
            const double pv = present_value(s, DiscountRate(r));
            EXPECT_LT(pv, prev);
            prev = pv;
        }
    }
}

TEST(RemainingLiabilities, Examples) {
    const auto s = flat(10, 5);
    EXPECT_DOUBLE_EQ(remaining_liabilities(s, 2, DiscountRate(0.0)), 30.0);
    EXPECT_DOUBLE_EQ(remaining_liabilities(s, 5, DiscountRate(0.03)), 0.0);
    EXPECT_DOUBLE_EQ(remaining_liabilities(s, 0, DiscountRate(0.0)), 50.0);
    EXPECT_THROW(remaining_liabilities(s, -1, DiscountRate(0.0)), DomainError);
    EXPECT_THROW(remaining_liabilities(s, 6, DiscountRate(0.0)), DomainError);
}

TEST(RemainingLiabilities, BackwardRecursion) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> amt(0.0, 4.0), rate(-0.03, 0.06);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<double> a(2 + rng() % 60);
        for (auto& x : a) x = amt(rng);
        const CashflowSchedule s(a);
        const DiscountRate r(rate(rng));
        const auto curve = remaining_liabilities_curve(s, r);
        ASSERT_EQ(curve.size(), a.size() + 1);
        EXPECT_EQ(curve.back(), 0.0);
        EXPECT_DOUBLE_EQ(curve[0], present_value(s, r));
        for (int t = 0; t < s.horizon(); ++t) {
            const double rhs = (curve[static_cast<std::size_t>(t) + 1] + s.at(t + 1)) / (1.0 + r.value());
            EXPECT_NEAR(curve[static_cast<std::size_t>(t)], rhs, 1e-9 * std::max(1.0, std::abs(rhs)));
        }
    }
}

TEST(SyntheticSchedule, FlatExample) {
    const auto s = make_synthetic_schedule(50, DiscountRate(0.0), 5, FlatShape{});
    for (int t = 1; t <= 5; ++t) EXPECT_NEAR(s.at(t), 10.0, 1e-12);
}

TEST(SyntheticSchedule, LinearDecayExample) {
    const auto s = make_synthetic_schedule(30, DiscountRate(0.0), 3, LinearDecayShape{});
    EXPECT_NEAR(s.total(), 30.0, 1e-12);
    EXPECT_GT(s.at(1), s.at(2));
    EXPECT_GT(s.at(2), s.at(3));
    EXPECT_EQ(s.at(3), 0.0);
    EXPECT_THROW(make_synthetic_schedule(30, DiscountRate(0.0), 1, LinearDecayShape{}), DomainError);
}

TEST(SyntheticSchedule, ArmadilloPresentValueAgainstOracle) {
    const DiscountRate r(-0.0075);
    const auto s = make_synthetic_schedule(100, r, 65, ArmadilloShape{15, 0.5});
    std::vector<double> a(s.amounts().begin(), s.amounts().end());
    EXPECT_NEAR(oracle::present_value(a, -0.0075), 100.0, 1e-9);

    // shape contract: proportional to the written-out weights
    const auto w = oracle::armadillo_weights(65, 15, 0.5);
    const double scale = a[14] / w[14];
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], scale * w[i], 1e-12 * scale);
    EXPECT_EQ(s.at(65), 0.0);
    EXPECT_GT(s.at(64), 0.0);
    for (int t = 1; t < 15; ++t) EXPECT_LT(s.at(t), s.at(t + 1));
    for (int t = 15; t < 65; ++t) EXPECT_GT(s.at(t), s.at(t + 1));
}

TEST(SyntheticSchedule, RoundTripsForAllShapes) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> pv(1.0, 500.0), rate(-0.02, 0.06);
    for (int trial = 0; trial < 60; ++trial) {
        const int h = 2 + static_cast<int>(rng() % 90);
        const double target = pv(rng);
        const DiscountRate r(rate(rng));
        const ScheduleShape shapes[] = {FlatShape{}, LinearDecayShape{},
                                        ArmadilloShape{1 + static_cast<int>(rng() % h), 0.25}};
        for (const auto& shape : shapes) {
            const auto s = make_synthetic_schedule(target, r, h, shape);
            EXPECT_NEAR(present_value(s, r), target, 1e-9 * target) << shape_name(shape) << " h=" << h;
        }
    }
}

TEST(SyntheticSchedule, RejectsInfeasibleShapes) {
    EXPECT_THROW(make_synthetic_schedule(100, DiscountRate(0.0), 10, ArmadilloShape{11, 0.5}), DomainError);
    EXPECT_THROW(make_synthetic_schedule(100, DiscountRate(0.0), 10, ArmadilloShape{0, 0.5}), DomainError);
    EXPECT_THROW(make_synthetic_schedule(100, DiscountRate(0.0), 10, ArmadilloShape{5, 0.0}), DomainError);
    EXPECT_THROW(make_synthetic_schedule(0, DiscountRate(0.0), 10, FlatShape{}), DomainError);
    EXPECT_THROW(make_synthetic_schedule(10, DiscountRate(0.0), 0, FlatShape{}), DomainError);
}

TEST(Cpi, Adjust) {
    const CpiIndex idx({{2011, 100.0}, {2023, 110.0}});
    EXPECT_EQ(cpi_adjust(100, 2011, 2011, idx), 100.0);
    EXPECT_DOUBLE_EQ(cpi_adjust(100, 2011, 2023, idx), 110.0);
    EXPECT_NEAR(cpi_adjust(cpi_adjust(100, 2011, 2023, idx), 2023, 2011, idx), 100.0, 1e-12);
    EXPECT_THROW(cpi_adjust(100, 2011, 2015, idx), LookupError);
    EXPECT_THROW(CpiIndex({{2000, 0.0}}), DomainError);
}
