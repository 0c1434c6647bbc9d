#pragma once

// Run configuration loaded from JSON. Every key is optional and falls back to
// the defaults below; unknown keys are rejected. Percent-valued keys end in
// _pct and are converted to fractions here. See configs/schema.json.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "pensim/cashflow.hpp"
#include "pensim/error.hpp"
#include "pensim/io/csv.hpp"
#include "pensim/io/datasets.hpp"
#include "pensim/rates.hpp"
#include "pensim/returns.hpp"
#include "pensim/runoff.hpp"
#include "pensim/sfs.hpp"

namespace pensim::io {

enum class OutputFormat { csv, json };

inline std::string to_string(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

inline OutputFormat parse_output_format(const std::string& s) {
    if (s == "csv") return OutputFormat::csv;
    if (s == "json") return OutputFormat::json;
    throw ValidationError("output.format", "must be \"csv\" or \"json\", got \"" + s + "\"");
}

struct CashflowSettings {
    ScheduleShape shape = ArmadilloShape{};
    double total_pv = 100.0;
    double rate = -0.0075;
    std::optional<std::string> csv;  // replaces the synthetic schedule when set
};

struct CovenantSettings {
    CovenantMode mode = CovenantMode::annual_stream;
    double fraction_of_payroll = 0.10;
    int duration_years = 30;
    double npv_rate = 0.0;
};

struct RatesSettings {
    double pre_ret = 0.05;
    double post_ret = 0.01;
    double fsc_weight_pre = 0.55;
    double accrual_pv = 3.7;  // GBP bn at the combined base rate
    int accrual_horizon_years = 40;
    ScheduleShape accrual_shape = LinearDecayShape{};
    DdrParam sensitivity_param = DdrParam::pre_ret;
    std::vector<double> deltas_ppt{-1.0, -0.5, 0.0, 0.5, 1.0};
};

struct RunConfig {
    double initial_assets = 100.0;
    double equity_fraction = 0.10;
    int n_paths = 1000;
    std::uint64_t master_seed = 0;
    int horizon_years = 65;
    double payroll = 10.0;
    double sfs_rate_for_fr = -0.0075;
    unsigned threads = 0;
    ReturnModel model{};
    std::optional<CovenantSettings> covenant = CovenantSettings{};
    CashflowSettings cashflows{};
    SfSSpec sfs{};
    RatesSettings rates{};
    std::string output_dir = "out";
    OutputFormat format = OutputFormat::csv;
    std::filesystem::path base_dir;  // relative csv paths resolve against this

    void validate() const;
    CashflowSchedule schedule() const;
    RunoffConfig runoff() const;
    DualDiscountRate ddr() const;
    CashflowSchedule accrual_schedule() const;
};

namespace detail {

class ObjectReader {
public:
    ObjectReader(const nlohmann::json& j, std::string prefix) : j_(j), prefix_(std::move(prefix)) {
        if (!j_.is_object()) throw ValidationError(prefix_.empty() ? "<root>" : prefix_, "must be a JSON object");
    }

    void allow(std::initializer_list<const char*> keys) const {
        std::set<std::string> ok(keys.begin(), keys.end());
        for (const auto& [key, _] : j_.items()) {
            if (!ok.contains(key)) throw ValidationError(name(key), "unknown key");
        }
    }

    bool has(const char* key) const { return j_.contains(key) && !j_.at(key).is_null(); }

    double number(const char* key, double fallback) const {
        if (!has(key)) return fallback;
        const auto& v = j_.at(key);
        if (!v.is_number()) throw ValidationError(name(key), "must be a number");
        return v.get<double>();
    }

    double percent(const char* key, double fallback_fraction) const {
        return number(key, fallback_fraction * 100.0) / 100.0;
    }

    long long integer(const char* key, long long fallback) const {
        if (!has(key)) return fallback;
        const auto& v = j_.at(key);
        if (!v.is_number_integer()) throw ValidationError(name(key), "must be an integer");
        return v.get<long long>();
    }

    std::uint64_t unsigned_integer(const char* key, std::uint64_t fallback) const {
        if (!has(key)) return fallback;
        const auto& v = j_.at(key);
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
            throw ValidationError(name(key), "must be a non-negative integer");
        }
        return v.get<std::uint64_t>();
    }

    std::string string(const char* key, const std::string& fallback) const {
        if (!has(key)) return fallback;
        const auto& v = j_.at(key);
        if (!v.is_string()) throw ValidationError(name(key), "must be a string");
        return v.get<std::string>();
    }

    const nlohmann::json& at(const char* key) const { return j_.at(key); }
    std::string name(const std::string& key) const { return prefix_.empty() ? key : prefix_ + "." + key; }

private:
    const nlohmann::json& j_;
    std::string prefix_;
};

inline ScheduleShape read_shape(const ObjectReader& r, const std::string& field, const std::string& fallback) {
    const auto shape = r.string("shape", fallback);
    if (shape == "flat") return FlatShape{};
    if (shape == "linear_decay") return LinearDecayShape{};
    if (shape == "armadillo") {
        ArmadilloShape a;
        a.peak_year = static_cast<int>(r.integer("peak_year", a.peak_year));
        a.start_fraction = r.number("start_fraction", a.start_fraction);
        return a;
    }
    throw ValidationError(field, "unknown shape \"" + shape + "\" (flat, linear_decay, armadillo)");
}

} // namespace detail

inline RunConfig parse_run_config(const nlohmann::json& j, std::filesystem::path base_dir = {}) {
    RunConfig c;
    c.base_dir = std::move(base_dir);
    const detail::ObjectReader root(j, "");
    root.allow({"initial_assets_gbp_bn", "equity_fraction", "n_paths", "master_seed", "horizon_years",
                "payroll_gbp_bn", "sfs_rate_for_fr_pct", "threads", "equity_mean_pct", "equity_sd_pct",
                "bond_mean_pct", "bond_sd_pct", "cross_correlation", "return_distribution", "covenant", "cashflows",
                "sfs", "rates", "output", "description"});

    c.initial_assets = root.number("initial_assets_gbp_bn", c.initial_assets);
    c.equity_fraction = root.number("equity_fraction", c.equity_fraction);
    c.n_paths = static_cast<int>(root.integer("n_paths", c.n_paths));
    c.master_seed = root.unsigned_integer("master_seed", c.master_seed);
    c.horizon_years = static_cast<int>(root.integer("horizon_years", c.horizon_years));
    c.payroll = root.number("payroll_gbp_bn", c.payroll);
    c.sfs_rate_for_fr = root.percent("sfs_rate_for_fr_pct", c.sfs_rate_for_fr);
    const auto threads = root.integer("threads", 0);
    if (threads < 0) throw ValidationError("threads", "must be >= 0");
    c.threads = static_cast<unsigned>(threads);

    c.model.equity_mean = root.percent("equity_mean_pct", c.model.equity_mean);
    c.model.equity_sd = root.percent("equity_sd_pct", c.model.equity_sd);
    c.model.bond_mean = root.percent("bond_mean_pct", c.model.bond_mean);
    c.model.bond_sd = root.percent("bond_sd_pct", c.model.bond_sd);
    c.model.cross_correlation = root.number("cross_correlation", c.model.cross_correlation);
    const auto dist = root.string("return_distribution", "normal");
    if (dist == "normal") {
        c.model.distribution = ReturnDistribution::normal;
    } else if (dist == "lognormal") {
        c.model.distribution = ReturnDistribution::lognormal;
    } else {
        throw ValidationError("return_distribution", "must be \"normal\" or \"lognormal\"");
    }

    if (root.has("covenant")) {
        const detail::ObjectReader cov(root.at("covenant"), "covenant");
        cov.allow({"mode", "fraction_of_payroll", "duration_years", "npv_rate_pct"});
        const auto mode = cov.string("mode", "annual_stream");
        if (mode == "none") {
            c.covenant.reset();
        } else {
            CovenantSettings s;
            if (mode == "annual_stream") {
                s.mode = CovenantMode::annual_stream;
            } else if (mode == "upfront_npv") {
                s.mode = CovenantMode::upfront_npv;
            } else {
                throw ValidationError("covenant.mode", "must be annual_stream, upfront_npv or none");
            }
            s.fraction_of_payroll = cov.number("fraction_of_payroll", s.fraction_of_payroll);
            s.duration_years = static_cast<int>(cov.integer("duration_years", s.duration_years));
            s.npv_rate = cov.percent("npv_rate_pct", s.npv_rate);
            c.covenant = s;
        }
    }

    if (root.has("cashflows")) {
        const detail::ObjectReader cf(root.at("cashflows"), "cashflows");
        cf.allow({"shape", "peak_year", "start_fraction", "total_pv_gbp_bn", "rate_pct", "csv"});
        if (cf.has("csv")) {
            c.cashflows.csv = cf.string("csv", "");
        } else {
            c.cashflows.shape = detail::read_shape(cf, "cashflows.shape", "armadillo");
        }
        c.cashflows.total_pv = cf.number("total_pv_gbp_bn", c.cashflows.total_pv);
        c.cashflows.rate = cf.percent("rate_pct", c.cashflows.rate);
    }

    if (root.has("sfs")) {
        const detail::ObjectReader s(root.at("sfs"), "sfs");
        s.allow({"fr_threshold", "confidence", "cadence", "pass_mode"});
        c.sfs.fr_threshold = s.number("fr_threshold", c.sfs.fr_threshold);
        c.sfs.confidence = s.number("confidence", c.sfs.confidence);
        const auto cadence = s.string("cadence", "annual");
        if (cadence == "annual") {
            c.sfs.cadence = Cadence::annual;
        } else if (cadence == "triennial") {
            c.sfs.cadence = Cadence::triennial;
        } else {
            throw ValidationError("sfs.cadence", "must be annual or triennial");
        }
        const auto mode = s.string("pass_mode", "per_checkpoint_max");
        if (mode == "per_checkpoint_max") {
            c.sfs.pass_mode = PassMode::per_checkpoint_max;
        } else if (mode == "ever_breach") {
            c.sfs.pass_mode = PassMode::ever_breach;
        } else {
            throw ValidationError("sfs.pass_mode", "must be per_checkpoint_max or ever_breach");
        }
    }

    if (root.has("rates")) {
        const detail::ObjectReader r(root.at("rates"), "rates");
        r.allow({"pre_ret_pct", "post_ret_pct", "fsc_weight_pre", "accrual_pv_gbp_bn", "accrual_horizon_years",
                 "accrual_shape", "sensitivity_param", "deltas_ppt"});
        auto& s = c.rates;
        s.pre_ret = r.percent("pre_ret_pct", s.pre_ret);
        s.post_ret = r.percent("post_ret_pct", s.post_ret);
        s.fsc_weight_pre = r.number("fsc_weight_pre", s.fsc_weight_pre);
        s.accrual_pv = r.number("accrual_pv_gbp_bn", s.accrual_pv);
        s.accrual_horizon_years = static_cast<int>(r.integer("accrual_horizon_years", s.accrual_horizon_years));
        const auto shape = r.string("accrual_shape", "linear_decay");
        if (shape == "flat") {
            s.accrual_shape = FlatShape{};
        } else if (shape == "linear_decay") {
            s.accrual_shape = LinearDecayShape{};
        } else {
            throw ValidationError("rates.accrual_shape", "must be flat or linear_decay");
        }
        const auto param = r.string("sensitivity_param", "pre_ret");
        if (param != "pre_ret" && param != "post_ret") {
            throw ValidationError("rates.sensitivity_param", "must be pre_ret or post_ret");
        }
        s.sensitivity_param = parse_ddr_param(param);
        if (r.has("deltas_ppt")) {
            const auto& arr = r.at("deltas_ppt");
            if (!arr.is_array()) throw ValidationError("rates.deltas_ppt", "must be an array of numbers");
            s.deltas_ppt.clear();
            for (const auto& v : arr) {
                if (!v.is_number()) throw ValidationError("rates.deltas_ppt", "must be an array of numbers");
                s.deltas_ppt.push_back(v.get<double>());
            }
        }
    }

    if (root.has("output")) {
        const detail::ObjectReader o(root.at("output"), "output");
        o.allow({"dir", "format"});
        c.output_dir = o.string("dir", c.output_dir);
        c.format = parse_output_format(o.string("format", "csv"));
    }

    c.validate();
    return c;
}

inline RunConfig load_run_config(const std::string& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError("<root>", std::string("invalid JSON: ") + e.what());
    }
    return parse_run_config(j, std::filesystem::path(path).parent_path());
}

inline void RunConfig::validate() const {
    auto need = [](bool ok, const char* field, const char* msg) {
        if (!ok) throw ValidationError(field, msg);
    };
    need(initial_assets >= 0.0 && std::isfinite(initial_assets), "initial_assets_gbp_bn", "must be finite and >= 0");
    need(equity_fraction >= 0.0 && equity_fraction <= 1.0, "equity_fraction", "must be in [0, 1]");
    need(n_paths >= 1, "n_paths", "must be >= 1");
    need(horizon_years >= 1 && horizon_years <= 200, "horizon_years", "must be in [1, 200]");
    need(payroll > 0.0, "payroll_gbp_bn", "must be > 0");
    need(sfs_rate_for_fr > -1.0, "sfs_rate_for_fr_pct", "must be > -100");
    need(model.equity_sd >= 0.0, "equity_sd_pct", "must be >= 0");
    need(model.bond_sd >= 0.0, "bond_sd_pct", "must be >= 0");
    need(std::abs(model.cross_correlation) <= 1.0, "cross_correlation", "must be in [-1, 1]");
    need(std::isfinite(model.equity_mean), "equity_mean_pct", "must be finite");
    need(std::isfinite(model.bond_mean), "bond_mean_pct", "must be finite");
    if (model.distribution == ReturnDistribution::lognormal) {
        need(model.equity_mean > -1.0, "equity_mean_pct", "must be > -100 for lognormal returns");
        need(model.bond_mean > -1.0, "bond_mean_pct", "must be > -100 for lognormal returns");
    }
    if (covenant) {
        need(covenant->fraction_of_payroll >= 0.0, "covenant.fraction_of_payroll", "must be >= 0");
        need(covenant->duration_years >= 0, "covenant.duration_years", "must be >= 0");
        need(covenant->npv_rate > -1.0, "covenant.npv_rate_pct", "must be > -100");
    }
    if (!cashflows.csv) {
        need(cashflows.total_pv > 0.0, "cashflows.total_pv_gbp_bn", "must be > 0");
        need(cashflows.rate > -1.0, "cashflows.rate_pct", "must be > -100");
        if (const auto* a = std::get_if<ArmadilloShape>(&cashflows.shape)) {
            need(a->peak_year >= 1 && a->peak_year <= horizon_years, "cashflows.peak_year",
                 "must be within 1..horizon_years");
            need(a->start_fraction > 0.0 && a->start_fraction <= 1.0, "cashflows.start_fraction", "must be in (0, 1]");
        }
        if (std::holds_alternative<LinearDecayShape>(cashflows.shape)) {
            need(horizon_years >= 2, "horizon_years", "linear_decay needs at least 2 years");
        }
    }
    need(sfs.fr_threshold > 0.0 && sfs.fr_threshold < 2.0, "sfs.fr_threshold", "must be in (0, 2)");
    need(sfs.confidence > 0.0 && sfs.confidence < 1.0, "sfs.confidence", "must be in (0, 1)");
    need(rates.pre_ret > -1.0, "rates.pre_ret_pct", "must be > -100");
    need(rates.post_ret > -1.0, "rates.post_ret_pct", "must be > -100");
    need(rates.fsc_weight_pre >= 0.0 && rates.fsc_weight_pre <= 1.0, "rates.fsc_weight_pre", "must be in [0, 1]");
    need(rates.accrual_pv > 0.0, "rates.accrual_pv_gbp_bn", "must be > 0");
    need(rates.accrual_horizon_years >= 2, "rates.accrual_horizon_years", "must be >= 2");
    need(!output_dir.empty(), "output.dir", "must not be empty");
}

inline CashflowSchedule RunConfig::schedule() const {
    if (cashflows.csv) {
        std::filesystem::path p(*cashflows.csv);
        if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
        return load_cashflows(p.string());
    }
    return make_synthetic_schedule(cashflows.total_pv, DiscountRate(cashflows.rate), horizon_years, cashflows.shape);
}

inline RunoffConfig RunConfig::runoff() const {
    RunoffConfig r{initial_assets, schedule(), PortfolioWeights(equity_fraction), model, std::nullopt,
                   DiscountRate(sfs_rate_for_fr)};
    if (covenant) {
        CovenantSupport s;
        s.payroll = payroll;
        s.fraction_of_payroll = covenant->fraction_of_payroll;
        s.duration = covenant->duration_years;
        s.mode = covenant->mode;
        s.npv_rate = DiscountRate(covenant->npv_rate);
        r.covenant = s;
    }
    return r;
}

inline DualDiscountRate RunConfig::ddr() const {
    return DualDiscountRate{DiscountRate(rates.pre_ret), DiscountRate(rates.post_ret)};
}

inline CashflowSchedule RunConfig::accrual_schedule() const {
    return make_synthetic_schedule(rates.accrual_pv, ddr_combine(ddr(), rates.fsc_weight_pre),
                                   rates.accrual_horizon_years, rates.accrual_shape);
}

} // namespace pensim::io
