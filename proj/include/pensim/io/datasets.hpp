#pragma once

// Loaders and writers for the on-disk data formats.
//
//   cashflows.csv    year_offset,amount_gbp_bn        (year_offset 1..H contiguous)
//   valuations.csv   date,label,source,benefits_regime,gilt_yield_pct,fsc_pct,
//                    tp_liabilities_gbp_bn,sfs_liabilities_gbp_bn,assets_gbp_bn,provenance
//   gilt_yields.csv  date,yield_pct
//   cpi.csv          year,index
//   reliance inputs  label,assets_gbp_bn,tp_liabilities_gbp_bn,sfs_liabilities_gbp_bn,
//                    transition_risk_gbp_bn,affrc_gbp_bn   (or the JSON equivalent)

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pensim/cashflow.hpp"
#include "pensim/io/csv.hpp"
#include "pensim/regression.hpp"
#include "pensim/reliance.hpp"

namespace pensim::io {

inline const std::vector<std::string> kCashflowHeader{"year_offset", "amount_gbp_bn"};
inline const std::vector<std::string> kValuationHeader{
    "date",  "label", "source", "benefits_regime", "gilt_yield_pct", "fsc_pct", "tp_liabilities_gbp_bn",
    "sfs_liabilities_gbp_bn", "assets_gbp_bn", "provenance"};
inline const std::vector<std::string> kGiltYieldHeader{"date", "yield_pct"};
inline const std::vector<std::string> kCpiHeader{"year", "index"};
inline const std::vector<std::string> kRelianceHeader{"label", "assets_gbp_bn", "tp_liabilities_gbp_bn",
                                                      "sfs_liabilities_gbp_bn", "transition_risk_gbp_bn",
                                                      "affrc_gbp_bn"};

inline CashflowSchedule cashflows_from_table(const CsvTable& t) {
    t.require_header(kCashflowHeader, "cashflows.csv");
    std::vector<double> amounts;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const int year = parse_int(t.rows[i][0], "cashflows.csv year_offset");
        if (year != static_cast<int>(i) + 1) {
            throw DataError("cashflows.csv: year_offset must run 1..H contiguously (row " + std::to_string(i + 1) +
                            " has " + std::to_string(year) + ")");
        }
        amounts.push_back(parse_number(t.rows[i][1], "cashflows.csv amount_gbp_bn"));
    }
    try {
        return CashflowSchedule(std::move(amounts));
    } catch (const DomainError& e) {
        throw DataError(std::string("cashflows.csv: ") + e.what());
    }
}

inline CsvTable cashflows_to_table(const CashflowSchedule& s) {
    CsvTable t{kCashflowHeader, {}};
    for (int year = 1; year <= s.horizon(); ++year) t.rows.push_back({std::to_string(year), format_number(s.at(year))});
    return t;
}

inline CashflowSchedule load_cashflows(const std::string& path) { return cashflows_from_table(read_csv(path)); }

namespace detail {
inline std::string optional_cell(const std::optional<double>& v) { return v ? format_number(*v) : std::string{}; }
} // namespace detail

inline std::vector<ValuationRecord> valuations_from_table(const CsvTable& t) {
    t.require_header(kValuationHeader, "valuations.csv");
    std::vector<ValuationRecord> out;
    for (const auto& row : t.rows) {
        ValuationRecord r;
        r.date = row[0];
        r.label = row[1];
        r.source = row[2];
        r.benefits_regime = parse_benefits_regime(row[3]);
        r.gilt_yield_pct = parse_number(row[4], "valuations.csv gilt_yield_pct");
        r.fsc_pct = parse_optional_number(row[5], "valuations.csv fsc_pct");
        r.tp_liabilities_gbp_bn = parse_optional_number(row[6], "valuations.csv tp_liabilities_gbp_bn");
        r.sfs_liabilities_gbp_bn = parse_optional_number(row[7], "valuations.csv sfs_liabilities_gbp_bn");
        r.assets_gbp_bn = parse_optional_number(row[8], "valuations.csv assets_gbp_bn");
        r.provenance = row[9];
        r.validate();
        out.push_back(std::move(r));
    }
    return out;
}

inline CsvTable valuations_to_table(const std::vector<ValuationRecord>& records) {
    CsvTable t{kValuationHeader, {}};
    for (const auto& r : records) {
        t.rows.push_back({r.date, r.label, r.source, to_string(r.benefits_regime), format_number(r.gilt_yield_pct),
                          detail::optional_cell(r.fsc_pct), detail::optional_cell(r.tp_liabilities_gbp_bn),
                          detail::optional_cell(r.sfs_liabilities_gbp_bn), detail::optional_cell(r.assets_gbp_bn),
                          r.provenance});
    }
    return t;
}

inline std::vector<ValuationRecord> load_valuations(const std::string& path) {
    return valuations_from_table(read_csv(path));
}

struct GiltYieldObservation {
    std::string date;
    double yield_pct = 0.0;
};

inline std::vector<GiltYieldObservation> gilt_yields_from_table(const CsvTable& t) {
    t.require_header(kGiltYieldHeader, "gilt_yields.csv");
    std::vector<GiltYieldObservation> out;
    for (const auto& row : t.rows) out.push_back({row[0], parse_number(row[1], "gilt_yields.csv yield_pct")});
    return out;
}

inline CsvTable gilt_yields_to_table(const std::vector<GiltYieldObservation>& obs) {
    CsvTable t{kGiltYieldHeader, {}};
    for (const auto& o : obs) t.rows.push_back({o.date, format_number(o.yield_pct)});
    return t;
}

inline CpiIndex cpi_from_table(const CsvTable& t) {
    t.require_header(kCpiHeader, "cpi.csv");
    std::map<int, double> levels;
    for (const auto& row : t.rows) {
        const int year = parse_int(row[0], "cpi.csv year");
        if (!levels.emplace(year, parse_number(row[1], "cpi.csv index")).second) {
            throw DataError("cpi.csv: duplicate year " + std::to_string(year));
        }
    }
    try {
        return CpiIndex(std::move(levels));
    } catch (const DomainError& e) {
        throw DataError(std::string("cpi.csv: ") + e.what());
    }
}

inline CsvTable cpi_to_table(const CpiIndex& cpi) {
    CsvTable t{kCpiHeader, {}};
    for (const auto& [year, level] : cpi.levels()) t.rows.push_back({std::to_string(year), format_number(level)});
    return t;
}

struct LabelledReliance {
    std::string label;
    RelianceInputs inputs;
};

inline std::vector<LabelledReliance> reliance_from_table(const CsvTable& t) {
    t.require_header(kRelianceHeader, "reliance inputs");
    std::vector<LabelledReliance> out;
    for (const auto& row : t.rows) {
        LabelledReliance r;
        r.label = row[0];
        r.inputs.assets = parse_number(row[1], "assets_gbp_bn");
        r.inputs.tp_liabilities = parse_number(row[2], "tp_liabilities_gbp_bn");
        r.inputs.sfs_liabilities = parse_number(row[3], "sfs_liabilities_gbp_bn");
        r.inputs.transition_risk = parse_number(row[4], "transition_risk_gbp_bn");
        r.inputs.affrc = parse_number(row[5], "affrc_gbp_bn");
        try {
            r.inputs.validate();
        } catch (const DomainError& e) {
            throw DataError("reliance inputs '" + r.label + "': " + e.what());
        }
        out.push_back(std::move(r));
    }
    return out;
}

// Accepts one object or an array of objects keyed like the CSV header.
inline std::vector<LabelledReliance> reliance_from_json(const nlohmann::json& j) {
    auto one = [](const nlohmann::json& o, std::size_t i) {
        if (!o.is_object()) throw DataError("reliance inputs JSON must contain objects");
        for (const auto& [key, _] : o.items()) {
            bool known = false;
            for (const auto& h : kRelianceHeader) known = known || h == key;
            if (!known) throw DataError("reliance inputs JSON: unknown key '" + key + "'");
        }
        auto num = [&](const char* key) {
            if (!o.contains(key) || !o.at(key).is_number()) {
                throw DataError(std::string("reliance inputs JSON: '") + key + "' must be a number");
            }
            return o.at(key).get<double>();
        };
        LabelledReliance r;
        r.label = o.value("label", "record " + std::to_string(i + 1));
        r.inputs = {num("assets_gbp_bn"), num("tp_liabilities_gbp_bn"), num("sfs_liabilities_gbp_bn"),
                    num("transition_risk_gbp_bn"), num("affrc_gbp_bn")};
        try {
            r.inputs.validate();
        } catch (const DomainError& e) {
            throw DataError("reliance inputs '" + r.label + "': " + e.what());
        }
        return r;
    };
    std::vector<LabelledReliance> out;
    if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) out.push_back(one(j[i], i));
    } else {
        out.push_back(one(j, 0));
    }
    return out;
}

inline std::vector<LabelledReliance> load_reliance_inputs(const std::string& path) {
    const auto text = read_file(path);
    const bool json = path.size() >= 5 && path.substr(path.size() - 5) == ".json";
    if (json) {
        try {
            return reliance_from_json(nlohmann::json::parse(text));
        } catch (const nlohmann::json::exception& e) {
            throw DataError("reliance inputs JSON: " + std::string(e.what()));
        }
    }
    return reliance_from_table(parse_csv(text));
}

} // namespace pensim::io
