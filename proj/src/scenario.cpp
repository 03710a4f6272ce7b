#include "tprice/scenario.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>

#include <fmt/format.h>

#include "tprice/error.hpp"

namespace tprice {

namespace {

using nlohmann::json;

[[noreturn]] void malformed(const std::string& what) { throw Error(ErrorCode::MalformedScenario, what); }

double number_at(const json& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end()) {
        malformed(fmt::format("missing key \"{}\"", key));
    }
    if (!it->is_number()) {
        malformed(fmt::format("key \"{}\" must be a number", key));
    }
    const double v = it->get<double>();
    if (!std::isfinite(v)) {
        malformed(fmt::format("key \"{}\" must be finite", key));
    }
    return v;
}

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed, std::string_view where) {
    for (const auto& [key, value] : j.items()) {
        if (!allowed.contains(key)) {
            malformed(fmt::format("unknown key \"{}\" in {}", key, where));
        }
    }
}

double parse_number(std::string_view text) {
    const std::string s(text);
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
        malformed(fmt::format("\"{}\" is not a number", s));
    }
    return v;
}

}  // namespace

CurveSpec parse_curve_spec(const json& j) {
    if (!j.is_object()) {
        malformed("curve must be a JSON object");
    }
    const auto fam = j.find("family");
    if (fam == j.end() || !fam->is_string()) {
        malformed("curve needs a string \"family\"");
    }
    const auto family = parse_family(fam->get<std::string>());
    if (!family) {
        malformed(fmt::format("unknown curve family \"{}\"", fam->get<std::string>()));
    }

    if (*family == Family::Points) {
        reject_unknown_keys(j, {"family", "points"}, "points curve");
        const auto pts = j.find("points");
        if (pts == j.end() || !pts->is_array()) {
            malformed("points curve needs an array \"points\" of [f, nar] pairs");
        }
        std::vector<Sample> samples;
        for (const auto& pair : *pts) {
            if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
                malformed("each point must be a [f, nar] pair of numbers");
            }
            samples.push_back({pair[0].get<double>(), pair[1].get<double>()});
        }
        return CurveSpec::from_points(std::move(samples));
    }

    reject_unknown_keys(j, {"family", "a", "b", "p", "q"}, "closed-form curve");
    const bool has_ab = j.contains("a") || j.contains("b");
    const bool has_pq = j.contains("p") || j.contains("q");
    if (has_ab == has_pq) {
        malformed(fmt::format("{} curve needs exactly one of (a, b) or (p, q)", to_string(*family)));
    }
    if (has_ab) {
        return CurveSpec::from_scale(*family, number_at(j, "a"), number_at(j, "b"));
    }
    return CurveSpec::from_optimum(*family, number_at(j, "p"), number_at(j, "q"));
}

Scenario parse_scenario(const json& j) {
    if (!j.is_object()) {
        malformed("scenario must be a JSON object");
    }
    reject_unknown_keys(j, {"curve", "c_real", "vc_a", "currency_label", "sweep"}, "scenario");

    Scenario s;
    if (j.contains("curve")) {
        s.curve = parse_curve_spec(j.at("curve"));
    }
    if (j.contains("c_real")) {
        s.c_real = number_at(j, "c_real");
    }
    if (j.contains("vc_a")) {
        s.vc_a = number_at(j, "vc_a");
    }
    if (j.contains("currency_label")) {
        if (!j.at("currency_label").is_string()) {
            malformed("currency_label must be a string");
        }
        s.currency_label = j.at("currency_label").get<std::string>();
    }
    if (j.contains("sweep")) {
        const json& sw = j.at("sweep");
        if (sw.is_array()) {
            std::vector<double> values;
            for (const auto& v : sw) {
                if (!v.is_number()) {
                    malformed("sweep values must be numbers");
                }
                values.push_back(v.get<double>());
            }
            s.sweep = std::move(values);
        } else if (sw.is_object()) {
            reject_unknown_keys(sw, {"start", "stop", "step"}, "sweep");
            GridRange r{number_at(sw, "start"), number_at(sw, "stop"), number_at(sw, "step")};
            if (!(r.step > 0.0)) {
                malformed("sweep step must be > 0");
            }
            if (r.stop < r.start) {
                r.step = -r.step;
            }
            s.sweep = r;
        } else {
            malformed("sweep must be a list of c values or {start, stop, step}");
        }
    }
    return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        malformed(fmt::format("cannot open scenario file {}", path.string()));
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        malformed(fmt::format("{} is not valid JSON: {}", path.string(), e.what()));
    }
    return parse_scenario(j);
}

json to_json(const CurveSpec& spec) {
    json j;
    j["family"] = std::string(to_string(spec.family));
    std::visit(
        [&](const auto& params) {
            using T = std::decay_t<decltype(params)>;
            if constexpr (std::is_same_v<T, ScaleParams>) {
                j["a"] = params.a;
                j["b"] = params.b;
            } else if constexpr (std::is_same_v<T, OptimumParams>) {
                j["p"] = params.p;
                j["q"] = params.q;
            } else {
                json pts = json::array();
                for (const auto& s : params) {
                    pts.push_back({s.f, s.nar});
                }
                j["points"] = std::move(pts);
            }
        },
        spec.params);
    return j;
}

json to_json(const Scenario& scenario) {
    json j;
    if (scenario.curve) {
        j["curve"] = to_json(*scenario.curve);
    }
    j["c_real"] = scenario.c_real;
    j["vc_a"] = scenario.vc_a;
    if (!scenario.currency_label.empty()) {
        j["currency_label"] = scenario.currency_label;
    }
    return j;
}

SweepSpec parse_grid(std::string_view text) {
    if (text.find(':') != std::string_view::npos) {
        std::vector<std::string_view> parts;
        std::size_t pos = 0;
        while (true) {
            const auto next = text.find(':', pos);
            parts.push_back(text.substr(pos, next - pos));
            if (next == std::string_view::npos) {
                break;
            }
            pos = next + 1;
        }
        if (parts.size() != 3) {
            malformed(fmt::format("grid \"{}\" must be start:stop:step", text));
        }
        return GridRange{parse_number(parts[0]), parse_number(parts[1]), parse_number(parts[2])};
    }
    std::vector<double> values;
    std::size_t pos = 0;
    while (true) {
        const auto next = text.find(',', pos);
        values.push_back(parse_number(text.substr(pos, next - pos)));
        if (next == std::string_view::npos) {
            break;
        }
        pos = next + 1;
    }
    return values;
}

std::vector<double> expand_sweep(const SweepSpec& sweep) {
    if (const auto* values = std::get_if<std::vector<double>>(&sweep)) {
        if (values->empty()) {
            malformed("sweep is empty");
        }
        return *values;
    }
    const GridRange& r = std::get<GridRange>(sweep);
    if (r.step == 0.0) {
        malformed("grid step must be non-zero");
    }
    const double span = r.stop - r.start;
    if (span * r.step < 0.0) {
        malformed(fmt::format("grid step {} points away from stop {}", r.step, r.stop));
    }
    const double count = std::floor(span / r.step + 1e-9);
    if (count > 100000.0) {
        malformed("grid has more than 100000 points");
    }
    std::vector<double> out;
    for (int i = 0; i <= static_cast<int>(count); ++i) {
        double v = r.start + i * r.step;
        if (std::abs(v) < 1e-12 * std::abs(r.step)) {
            v = 0.0;
        }
        out.push_back(v);
    }
    return out;
}

}  // namespace tprice
