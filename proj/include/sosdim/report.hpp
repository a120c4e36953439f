#pragma once

// JSON and CSV renderings of test results, dimension estimates and Monte Carlo
// tables. Field names here are a stable contract; the schemas below are also
// published under schema/ and every report is checked against them before it
// is written.

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstddef>
#include <ostream>
#include <string>
#include <string_view>

#include "sosdim/dimtest.hpp"
#include "sosdim/errors.hpp"
#include "sosdim/harness.hpp"
#include "sosdim/presets.hpp"

namespace sosdim {

using Json = nlohmann::json;

namespace schema {

inline constexpr std::string_view kEstimateReport = R"({
  "$schema": "http://json-schema.org/draft-07/schema#",
  "title": "sosdim dimension estimate",
  "type": "object",
  "required": ["method", "lags", "alpha", "strategy", "d_hat", "trace"],
  "properties": {
    "method": {"type": "string", "enum": ["AMUSE", "SOBI"]},
    "lags": {"type": "array", "minItems": 1, "items": {"type": "integer", "minimum": 1}},
    "alpha": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
    "strategy": {"type": "string", "enum": ["forward", "backward", "divide_and_conquer"]},
    "d_hat": {"type": "integer", "minimum": 0},
    "test_kind": {"type": "string", "enum": ["asymptotic", "bootstrap"]},
    "converged": {"type": "boolean"},
    "monotone": {"type": "boolean"},
    "T": {"type": "integer", "minimum": 2},
    "p": {"type": "integer", "minimum": 1},
    "trace": {
      "type": "array",
      "items": {
        "type": "object",
        "required": ["q", "stat", "df", "p_value", "converged"],
        "properties": {
          "q": {"type": "integer", "minimum": 0},
          "stat": {"type": "number", "minimum": 0},
          "df": {"type": "integer", "minimum": 1},
          "p_value": {"type": "number", "minimum": 0, "maximum": 1},
          "converged": {"type": "boolean"}
        }
      }
    }
  }
})";

inline constexpr std::string_view kTestReport = R"({
  "$schema": "http://json-schema.org/draft-07/schema#",
  "title": "sosdim white-noise subspace test",
  "type": "object",
  "required": ["method", "lags", "q", "r", "m_hat", "stat", "df", "p_value", "converged", "test_kind"],
  "properties": {
    "method": {"type": "string", "enum": ["AMUSE", "SOBI"]},
    "lags": {"type": "array", "minItems": 1, "items": {"type": "integer", "minimum": 1}},
    "q": {"type": "integer", "minimum": 0},
    "r": {"type": "integer", "minimum": 1},
    "m_hat": {"type": "number", "minimum": 0},
    "stat": {"type": "number", "minimum": 0},
    "df": {"type": "integer", "minimum": 1},
    "p_value": {"type": "number", "minimum": 0, "maximum": 1},
    "converged": {"type": "boolean"},
    "test_kind": {"type": "string", "enum": ["asymptotic", "bootstrap"]},
    "bootstrap_replicates": {"type": "integer", "minimum": 1},
    "T": {"type": "integer", "minimum": 2},
    "p": {"type": "integer", "minimum": 1}
  }
})";

inline constexpr std::string_view kTableReport = R"({
  "$schema": "http://json-schema.org/draft-07/schema#",
  "title": "sosdim Monte Carlo table",
  "type": "object",
  "required": ["kind", "setting", "preset_version", "alpha", "reps", "seed", "cells"],
  "properties": {
    "kind": {"type": "string", "enum": ["rejection", "dimension"]},
    "setting": {"type": "string"},
    "preset_version": {"type": "integer", "minimum": 1},
    "alpha": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
    "reps": {"type": "integer", "minimum": 1},
    "seed": {"type": "integer", "minimum": 0},
    "q": {"type": "integer", "minimum": 0},
    "strategy": {"type": "string", "enum": ["forward", "backward", "divide_and_conquer"]},
    "cells": {
      "type": "array",
      "items": {
        "type": "object",
        "required": ["n", "estimator", "test_kind"],
        "properties": {
          "n": {"type": "integer", "minimum": 2},
          "estimator": {"type": "string"},
          "test_kind": {"type": "string", "enum": ["asymptotic", "bootstrap"]},
          "rejections": {"type": "integer", "minimum": 0},
          "frequency": {"type": "number", "minimum": 0, "maximum": 1},
          "counts": {"type": "array", "items": {"type": "integer", "minimum": 0}}
        }
      }
    }
  }
})";

}  // namespace schema

namespace detail {

inline bool json_type_matches(const Json& v, const std::string& type) {
    if (type == "object") return v.is_object();
    if (type == "array") return v.is_array();
    if (type == "string") return v.is_string();
    if (type == "boolean") return v.is_boolean();
    if (type == "integer") return v.is_number_integer();
    if (type == "number") return v.is_number() && std::isfinite(v.get<double>());
    return false;
}

// Handles the keywords the schemas above use: type, required, properties,
// items, enum, minItems, minimum, maximum, exclusiveMinimum, exclusiveMaximum.
inline void validate_node(const Json& v, const Json& s, const std::string& path) {
    auto fail = [&](const std::string& why) { throw InvalidInput("report " + path + ": " + why); };
    if (s.contains("type") && !json_type_matches(v, s["type"].get<std::string>())) {
        fail("expected " + s["type"].get<std::string>());
    }
    if (s.contains("enum")) {
        bool found = false;
        for (const auto& e : s["enum"]) found = found || e == v;
        if (!found) fail("value " + v.dump() + " not allowed");
    }
    if (v.is_number()) {
        const double x = v.get<double>();
        if (s.contains("minimum") && x < s["minimum"].get<double>()) fail("below minimum");
        if (s.contains("maximum") && x > s["maximum"].get<double>()) fail("above maximum");
        if (s.contains("exclusiveMinimum") && x <= s["exclusiveMinimum"].get<double>()) fail("too small");
        if (s.contains("exclusiveMaximum") && x >= s["exclusiveMaximum"].get<double>()) fail("too large");
    }
    if (v.is_object()) {
        if (s.contains("required")) {
            for (const auto& key : s["required"]) {
                if (!v.contains(key.get<std::string>())) fail("missing '" + key.get<std::string>() + "'");
            }
        }
        if (s.contains("properties")) {
            for (const auto& [key, sub] : s["properties"].items()) {
                if (v.contains(key)) validate_node(v[key], sub, path + "." + key);
            }
        }
    }
    if (v.is_array()) {
        if (s.contains("minItems") && v.size() < s["minItems"].get<std::size_t>()) fail("too few items");
        if (s.contains("items")) {
            for (std::size_t i = 0; i < v.size(); ++i) {
                validate_node(v[i], s["items"], path + "[" + std::to_string(i) + "]");
            }
        }
    }
}

}  // namespace detail

/// Throws InvalidInput naming the first violation.
inline void validate_report(const Json& report, std::string_view schema_text) {
    detail::validate_node(report, Json::parse(schema_text), "$");
}

inline Json lags_json(const LagSet& lags) { return Json(lags.values()); }

inline Json to_json(const TestResult& t, std::size_t p) {
    Json j{{"method", to_string(t.method)}, {"lags", lags_json(t.lags)}, {"q", t.q},
           {"r", t.r}, {"m_hat", t.m_hat}, {"stat", t.scaled_stat}, {"df", t.df},
           {"p_value", t.p_value}, {"converged", t.converged}, {"test_kind", to_string(t.kind)},
           {"T", t.length}, {"p", p}};
    validate_report(j, schema::kTestReport);
    return j;
}

inline Json to_json(const DimensionEstimate& e, Method method, const LagSet& lags, TestKind kind,
                    std::size_t length, std::size_t p) {
    Json trace = Json::array();
    for (const auto& t : e.trace) {
        trace.push_back({{"q", t.q}, {"stat", t.stat}, {"df", t.df}, {"p_value", t.p_value},
                         {"converged", t.converged}});
    }
    Json j{{"method", to_string(method)}, {"lags", lags_json(lags)}, {"alpha", e.alpha},
           {"strategy", to_string(e.strategy)}, {"d_hat", e.d_hat}, {"trace", std::move(trace)},
           {"test_kind", to_string(kind)}, {"converged", e.converged}, {"monotone", e.monotone},
           {"T", length}, {"p", p}};
    validate_report(j, schema::kEstimateReport);
    return j;
}

inline Json to_json(const RejectionTable& t) {
    Json cells = Json::array();
    for (const auto& c : t.cells) {
        cells.push_back({{"n", c.n}, {"estimator", c.estimator}, {"test_kind", to_string(c.kind)},
                         {"rejections", c.rejections}, {"frequency", c.frequency()}});
    }
    Json j{{"kind", "rejection"}, {"setting", t.setting}, {"preset_version", kPresetVersion},
           {"alpha", t.options.alpha}, {"reps", t.options.reps}, {"seed", t.options.seed},
           {"q", t.q}, {"cells", std::move(cells)}};
    validate_report(j, schema::kTableReport);
    return j;
}

inline Json to_json(const DimensionTable& t) {
    Json cells = Json::array();
    for (const auto& c : t.cells) {
        cells.push_back({{"n", c.n}, {"estimator", c.estimator}, {"test_kind", to_string(c.kind)},
                         {"counts", c.counts}});
    }
    Json j{{"kind", "dimension"}, {"setting", t.setting}, {"preset_version", kPresetVersion},
           {"alpha", t.options.alpha}, {"reps", t.options.reps}, {"seed", t.options.seed},
           {"strategy", to_string(t.strategy)}, {"cells", std::move(cells)}};
    validate_report(j, schema::kTableReport);
    return j;
}

/// One row per n, one column per estimator x test kind.
inline void write_csv(std::ostream& out, const RejectionTable& t) {
    out << "n";
    for (const auto& e : t.estimators) {
        for (auto k : t.kinds) out << ',' << e.name << '_' << to_string(k);
    }
    out << '\n';
    std::size_t i = 0;
    for (auto n : t.ns) {
        out << n;
        for (std::size_t c = 0; c < t.estimators.size() * t.kinds.size(); ++c, ++i) {
            out << ',' << t.cells[i].frequency();
        }
        out << '\n';
    }
}

/// Long format, one row per (n, estimator, kind, d_hat).
inline void write_csv(std::ostream& out, const DimensionTable& t) {
    out << "n,estimator,test_kind,d_hat,count,frequency\n";
    for (const auto& c : t.cells) {
        for (std::size_t d = 0; d < c.counts.size(); ++d) {
            out << c.n << ',' << c.estimator << ',' << to_string(c.kind) << ',' << d << ','
                << c.counts[d] << ',' << c.frequency(d) << '\n';
        }
    }
}

}  // namespace sosdim
