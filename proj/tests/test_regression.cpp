#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "pensim/io/datasets.hpp"
#include "pensim/regression.hpp"

using namespace pensim;

namespace {

ValuationRecord record(std::string date, double gilt, std::optional<double> fsc, std::optional<double> tp = {},
                       std::string source = "valuation", BenefitsRegime regime = BenefitsRegime::pre2022) {
    ValuationRecord r;
    r.date = std::move(date);
    r.label = r.date;
    r.source = std::move(source);
    r.benefits_regime = regime;
    r.gilt_yield_pct = gilt;
    r.fsc_pct = fsc;
    r.tp_liabilities_gbp_bn = tp;
    return r;
}

} // namespace

TEST(OlsFit, ExactLine) {
    const std::vector<Point> pts{{1, 3}, {2, 5}, {3, 7}};
    const auto f = ols_fit(pts);
    EXPECT_NEAR(f.slope, 2.0, 1e-14);
    EXPECT_NEAR(f.intercept, 1.0, 1e-14);
    EXPECT_NEAR(f.r_squared, 1.0, 1e-14);
    EXPECT_EQ(f.n, 3);
}

TEST(OlsFit, TwoValuationPoints) {
    const std::vector<Point> pts{{0.7, 37.0}, {3.7, 20.6}};
    const auto f = ols_fit(pts);
    EXPECT_NEAR(f.slope, -16.4 / 3.0, 1e-12);
    EXPECT_NEAR(f.slope, -5.4667, 1e-4);
    EXPECT_NEAR(f.intercept, 40.827, 1e-3);
    EXPECT_NEAR(f.r_squared, 1.0, 1e-12);
}

TEST(OlsFit, BundledValuations) {
    const auto records = io::load_valuations(testutil::source_path("data/valuations.csv"));
    RecordFilter only_valuations;
    only_valuations.source = "valuation";
    const auto report = correlation_report(records, YField::fsc, only_valuations);
    ASSERT_EQ(report.rows.size(), 1u);
    const auto& f = report.rows[0].fit;
    EXPECT_EQ(f.n, 5);
    EXPECT_NEAR(f.r_squared, 0.976, 0.01);
    EXPECT_NEAR(f.slope, -5.4, 0.3);
    EXPECT_NEAR(f.intercept, 40.0, 2.0);
}

TEST(OlsFit, ConstantYGivesFlatLine) {
    const std::vector<Point> pts{{1, 4}, {2, 4}, {5, 4}};
    const auto f = ols_fit(pts);
    EXPECT_EQ(f.slope, 0.0);
    EXPECT_EQ(f.intercept, 4.0);
    EXPECT_EQ(f.r_squared, 1.0);
    EXPECT_THROW(pearson_r_squared(pts), UndefinedRSquaredError);
}

TEST(OlsFit, Degenerate) {
    const std::vector<Point> one{{1, 1}};
    EXPECT_THROW(ols_fit(one), NumericalError);
    const std::vector<Point> same_x{{2, 1}, {2, 3}};
    EXPECT_THROW(ols_fit(same_x), NumericalError);
    const std::vector<Point> bad{{1, 1}, {2, NAN}};
    EXPECT_THROW(ols_fit(bad), DataError);
}

TEST(OlsFit, RSquaredMatchesPearson) {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> noise(0.0, 2.0);
    std::uniform_real_distribution<double> x(-1.0, 5.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Point> pts;
        for (int i = 0; i < 3 + trial % 20; ++i) {
            const double xi = x(rng);
            pts.push_back({xi, 30 - 4 * xi + noise(rng)});
        }
        EXPECT_NEAR(ols_fit(pts).r_squared, pearson_r_squared(pts), 1e-12);
    }
}

TEST(OlsFit, AffineInvariance) {
    std::mt19937_64 rng(12);
    std::normal_distribution<double> z;
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Point> pts, moved;
        for (int i = 0; i < 8; ++i) pts.push_back({z(rng), z(rng)});
        const double a = 0.5 + std::abs(z(rng)), b = z(rng) * 10, c = -(0.5 + std::abs(z(rng))), d = z(rng) * 10;
        for (const auto& p : pts) moved.push_back({a * p.x + b, c * p.y + d});
        const auto f = ols_fit(pts), g = ols_fit(moved);
        EXPECT_NEAR(f.r_squared, g.r_squared, 1e-10);
        EXPECT_NEAR(g.slope, f.slope * c / a, 1e-9 * (1 + std::abs(g.slope)));
    }
}

TEST(LnTpFit, ExactExponential) {
    // TP = 100 exp(-0.2 y) in base-year money; CPI flat, so the fit is exact.
    const CpiIndex cpi({{2020, 1.0}, {2021, 1.0}, {2022, 1.0}, {2023, 1.0}});
    std::vector<ValuationRecord> rs;
    for (auto [year, y] : std::vector<std::pair<int, double>>{{2020, 0.5}, {2021, 1.5}, {2022, 2.5}, {2023, 3.0}}) {
        rs.push_back(record(std::to_string(year) + "-03-31", y, std::nullopt, 100 * std::exp(-0.2 * y)));
    }
    const auto f = ln_tp_fit(rs, cpi, 2023);
    EXPECT_NEAR(f.slope, -0.2, 1e-12);
    EXPECT_NEAR(f.intercept, std::log(100.0), 1e-12);
    EXPECT_NEAR(f.r_squared, 1.0, 1e-12);
}

TEST(LnTpFit, InflationOnlyLiabilitiesHaveZeroSlope) {
    // nominal TP grows exactly with CPI; in real terms it is constant
    const CpiIndex cpi({{2019, 100.0}, {2020, 102.0}, {2021, 105.0}, {2023, 120.0}});
    std::vector<ValuationRecord> rs{record("2019-03-31", 1.0, {}, 80.0), record("2020-03-31", 0.4, {}, 81.6),
                                    record("2021-03-31", 1.3, {}, 84.0)};
    const auto f = ln_tp_fit(rs, cpi, 2023);
    EXPECT_NEAR(f.slope, 0.0, 1e-12);
    EXPECT_NEAR(f.intercept, std::log(96.0), 1e-12);
}

TEST(LnTpFit, MatchesOlsOnTransformedPoints) {
    const CpiIndex cpi({{2019, 100.0}, {2020, 101.5}, {2021, 103.0}, {2023, 121.0}});
    std::vector<ValuationRecord> rs{record("2019-01-01", 1.2, {}, 90.0), record("2020-01-01", 0.3, {}, 99.0),
                                    record("2021-01-01", 0.9, {}, 95.0)};
    std::vector<Point> pts;
    for (const auto& r : rs) pts.push_back({r.gilt_yield_pct, std::log(*r.tp_liabilities_gbp_bn * 121.0 / cpi.level(r.year()))});
    const auto a = ln_tp_fit(rs, cpi, 2023), b = ols_fit(pts);
    EXPECT_NEAR(a.slope, b.slope, 1e-12);
    EXPECT_NEAR(a.intercept, b.intercept, 1e-12);
    rs[0].tp_liabilities_gbp_bn = 0.0;
    EXPECT_THROW(ln_tp_fit(rs, cpi, 2023), DomainError);
    rs[0].date = "2018-01-01";
    rs[0].tp_liabilities_gbp_bn = 1.0;
    EXPECT_THROW(ln_tp_fit(rs, cpi, 2023), LookupError);
}

TEST(CorrelationReport, GroupsPassThroughToOls) {
    std::vector<ValuationRecord> rs{record("2014-01-01", 3.4, 21.6), record("2020-01-01", 0.7, 37.0),
                                    record("2023-01-01", 3.7, 20.6), record("2021-01-01", 1.3, 36.7, {}, "monitoring"),
                                    record("2022-01-01", 2.3, 27.4, {}, "monitoring")};
    const auto report = correlation_report(rs, YField::fsc);
    ASSERT_EQ(report.rows.size(), 2u);
    for (const auto& row : report.rows) {
        std::vector<Point> pts;
        for (const auto& r : rs) {
            if (r.source == row.source) pts.push_back({r.gilt_yield_pct, *r.fsc_pct});
        }
        const auto f = ols_fit(pts);
        EXPECT_EQ(row.fit.slope, f.slope);
        EXPECT_EQ(row.fit.intercept, f.intercept);
        EXPECT_EQ(row.fit.r_squared, f.r_squared);
    }
}

TEST(CorrelationReport, EmptyAndThinGroupsWarn) {
    std::vector<ValuationRecord> rs{record("2014-01-01", 3.4, 21.6), record("2020-01-01", 0.7, 37.0),
                                    record("2021-01-01", 1.3, 36.7, {}, "monitoring")};
    RecordFilter nothing;
    nothing.source = "nonexistent";
    EXPECT_TRUE(correlation_report(rs, YField::fsc, nothing).rows.empty());
    const auto r = correlation_report(rs, YField::fsc);
    EXPECT_EQ(r.rows.size(), 1u);
    EXPECT_EQ(r.warnings.size(), 1u);
    EXPECT_TRUE(correlation_report(rs, YField::tp_liabilities).rows.empty());
}

TEST(Parsing, FieldsAndRegimes) {
    EXPECT_EQ(parse_y_field("tp"), YField::tp_liabilities);
    EXPECT_EQ(parse_y_field("fsc_pct"), YField::fsc);
    EXPECT_THROW(parse_y_field("gdp"), DataError);
    EXPECT_EQ(parse_benefits_regime("post2022"), BenefitsRegime::post2022);
    EXPECT_THROW(parse_benefits_regime("2022"), DataError);
}
