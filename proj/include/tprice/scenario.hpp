#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"
#include "tprice/curve.hpp"

namespace tprice {

/// start, stop, step; the sign of step must point from start to stop.
struct GridRange {
    double start;
    double stop;
    double step;
};

using SweepSpec = std::variant<std::vector<double>, GridRange>;

/// A reproducible solver input, normally read from a JSON file:
///
///   {"curve": {"family": "quadratic", "p": 100, "q": 1000},
///    "c_real": 0.4, "vc_a": 20, "currency_label": "GBP ",
///    "sweep": {"start": 0.5, "stop": 0.0, "step": 0.05}}
///
/// In files, a range sweep takes a positive step and runs from start
/// towards stop.
struct Scenario {
    std::optional<CurveSpec> curve;
    double c_real = 0.0;
    double vc_a = 0.0;
    std::string currency_label;
    std::optional<SweepSpec> sweep;
};

/// All parsers throw Error(MalformedScenario) with the offending key named.
[[nodiscard]] CurveSpec parse_curve_spec(const nlohmann::json& j);
[[nodiscard]] Scenario parse_scenario(const nlohmann::json& j);
[[nodiscard]] Scenario load_scenario(const std::filesystem::path& path);

[[nodiscard]] nlohmann::json to_json(const CurveSpec& spec);
[[nodiscard]] nlohmann::json to_json(const Scenario& scenario);

/// `start:stop:step` or `v1,v2,...`.
[[nodiscard]] SweepSpec parse_grid(std::string_view text);
[[nodiscard]] std::vector<double> expand_sweep(const SweepSpec& sweep);

}  // namespace tprice
