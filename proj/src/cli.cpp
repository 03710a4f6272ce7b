#include "tprice/cli.hpp"

#include <cmath>
#include <fstream>
#include <optional>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "tprice/error.hpp"
#include "tprice/scenario.hpp"
#include "tprice/schedule.hpp"
#include "tprice/table.hpp"

namespace tprice::cli {

namespace {

using nlohmann::json;

struct Options {
    std::string scenario_path;
    std::optional<std::string> family;
    std::optional<double> p;
    std::optional<double> q;
    std::optional<double> c_real;
    std::optional<double> vc_a;
    std::string format = "text";
    std::string out_path;
    std::optional<std::string> grid;
    std::optional<int> paper_table;
    std::optional<int> round;
    int samples = 50;
};

void add_common(CLI::App* sub, Options& o, const std::string& default_format) {
    o.format = default_format;
    sub->add_option("--scenario", o.scenario_path, "JSON scenario file");
    sub->add_option("--family", o.family, "Curve family")
        ->check(CLI::IsMember({"linear", "quadratic", "exponential", "points"}));
    sub->add_option("--p", o.p, "Net average revenue at the optimum");
    sub->add_option("--q", o.q, "Optimal output");
    sub->add_option("--c-real", o.c_real, "Target contribution share of maximum group contribution");
    sub->add_option("--vc-a", o.vc_a, "Source division variable cost per unit");
    sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "csv", "json"}));
    sub->add_option("--out", o.out_path, "Write output to this file instead of stdout");
}

void warn(std::ostream& err, std::string_view code, const std::string& message) {
    err << "warning[" << code << "]: " << message << '\n';
}

std::string money(const Scenario& s, double v) { return s.currency_label + format_fixed(v, 2); }

OptimumParams closed_form_optimum(const CurveSpec& spec) {
    const CalibratedCurve curve = calibrate(spec);
    return {curve.p(), curve.q()};
}

Scenario resolve_scenario(const Options& o) {
    Scenario s = o.scenario_path.empty() ? Scenario{} : load_scenario(o.scenario_path);

    const bool have_closed = s.curve && s.curve->family != Family::Points;
    if (o.family) {
        const Family family = *parse_family(*o.family);
        if (family == Family::Points) {
            if (!s.curve || s.curve->family != Family::Points) {
                throw Error(ErrorCode::MalformedScenario, "a points curve must be supplied through --scenario");
            }
            if (o.p || o.q) {
                throw Error(ErrorCode::MalformedScenario, "--p/--q do not apply to points curves");
            }
        } else {
            OptimumParams base = have_closed ? closed_form_optimum(*s.curve) : OptimumParams{1.0, 1.0};
            s.curve = CurveSpec::from_optimum(family, o.p.value_or(base.p), o.q.value_or(base.q));
        }
    } else if (o.p || o.q) {
        if (!have_closed) {
            throw Error(ErrorCode::MalformedScenario, "--p/--q need a closed-form curve (--family or --scenario)");
        }
        const OptimumParams base = closed_form_optimum(*s.curve);
        s.curve = CurveSpec::from_optimum(s.curve->family, o.p.value_or(base.p), o.q.value_or(base.q));
    }
    if (o.c_real) {
        s.c_real = *o.c_real;
    }
    if (o.vc_a) {
        s.vc_a = *o.vc_a;
    }
    if (!s.curve) {
        throw Error(ErrorCode::MalformedScenario, "no curve given; pass --scenario or --family");
    }
    return s;
}

void emit(const Options& o, const std::string& content, std::ostream& out) {
    if (o.out_path.empty()) {
        out << content;
        return;
    }
    std::ofstream file(o.out_path, std::ios::binary);
    if (!file || !(file << content)) {
        throw Error(ErrorCode::InvalidArgument, fmt::format("cannot write {}", o.out_path));
    }
}

// Emits a NotDecreasing warning if the curve failed its shape check.
bool report_shape(const CalibratedCurve& curve, std::ostream& err) {
    const NarShape& shape = curve.shape();
    if (shape.ok()) {
        return false;
    }
    warn(err, "NotDecreasing",
         fmt::format("net average revenue is {} on (0, q]: min {:.6g}, largest rise {:.6g}",
                     shape.positive ? "not monotone" : "not positive", shape.min_nar, shape.worst_increase));
    return true;
}

json schedule_json(const Scenario& s, const CalibratedCurve& curve, const Schedule& r) {
    json j;
    j["scenario"] = to_json(s);
    j["curve"] = {{"family", std::string(to_string(curve.family()))}, {"p", curve.p()}, {"q", curve.q()}};
    j["schedule"] = {
        {"c_effective", r.c_effective},
        {"c_max", r.c_max},
        {"x", r.x},
        {"f", r.f},
        {"t", r.t},
        {"n", r.n},
        {"n_adjusted", r.n_adjusted},
        {"at_feasibility_boundary", r.at_feasibility_boundary},
    };
    return j;
}

int cmd_solve(const Options& o, std::ostream& out, std::ostream& err) {
    const Scenario s = resolve_scenario(o);
    const CalibratedCurve curve = calibrate(*s.curve);
    const bool warned = report_shape(curve, err);
    const Schedule r = solve_schedule({s.c_real, s.vc_a, curve});

    std::string body;
    if (o.format == "json") {
        body = schedule_json(s, curve, r).dump(2) + "\n";
    } else if (o.format == "csv") {
        body = "family,p,q,c_real,vc_a,c_effective,c_max,x,f,t,n,n_adjusted,at_feasibility_boundary\n";
        body += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{}\n", to_string(curve.family()),
                            format_fixed(curve.p(), 2), format_fixed(curve.q(), 2), format_fixed(s.c_real, 3),
                            format_fixed(s.vc_a, 2), format_fixed(r.c_effective, 3), format_fixed(r.c_max, 3),
                            format_fixed(r.x, 3), format_fixed(r.f, 2), format_fixed(r.t, 2), format_fixed(r.n, 3),
                            format_fixed(r.n_adjusted, 3), r.at_feasibility_boundary ? "true" : "false");
    } else {
        const auto line = [&body](std::string_view key, const std::string& value) {
            body += fmt::format("  {:<24}{}\n", key, value);
        };
        body += fmt::format("Transfer price schedule ({} NAR curve)\n", to_string(curve.family()));
        line("p (NAR at optimum)", money(s, curve.p()));
        line("q (optimal output)", format_fixed(curve.q(), 2));
        line("c_real", format_fixed(s.c_real, 3));
        line("vc_a", money(s, s.vc_a));
        line("c_effective", format_fixed(r.c_effective, 3));
        line("c_max", format_fixed(r.c_max, 3));
        line("x", format_fixed(r.x, 3));
        line("f", format_fixed(r.f, 2));
        line("t", money(s, r.t));
        line("n", format_fixed(r.n, 3));
        line("n_adjusted", fmt::format("{} ({}%)", format_fixed(r.n_adjusted, 3), format_fixed(100.0 * r.n_adjusted, 1)));
        line("at_feasibility_boundary", r.at_feasibility_boundary ? "yes" : "no");
    }
    emit(o, body, out);
    return warned ? kExitWarnings : kExitOk;
}

int cmd_table(const Options& o, std::ostream& out, std::ostream& err) {
    SweepTable table;
    bool warned = false;
    if (o.paper_table) {
        const PaperTable which = *o.paper_table == 1   ? PaperTable::Table1
                                 : *o.paper_table == 3 ? PaperTable::Table3
                                                       : PaperTable::Table4;
        table = paper_table(which);
        if (o.round) {
            table.rounding = Rounding::uniform(*o.round);
        }
    } else {
        const Scenario s = resolve_scenario(o);
        std::optional<SweepSpec> grid = s.sweep;
        if (o.grid) {
            grid = parse_grid(*o.grid);
        }
        if (!grid) {
            throw Error(ErrorCode::MalformedScenario, "no grid given; pass --grid or a scenario \"sweep\"");
        }
        const std::vector<double> cs = expand_sweep(*grid);
        const CalibratedCurve curve = calibrate(*s.curve);
        warned = report_shape(curve, err);

        SweepOptions options;
        options.vc_a = s.vc_a;
        options.extended = !o.scenario_path.empty() || o.p || o.q || o.vc_a;
        options.rounding = Rounding::uniform(o.round.value_or(3));
        table = sweep(curve, cs, options);
    }

    std::string body;
    if (o.format == "csv") {
        body = render_csv(table);
    } else if (o.format == "text") {
        body = render_text(table);
    } else {
        json rows = json::array();
        for (const auto& row : table.rows) {
            json r{{"c", row.c}, {"feasible", row.feasible}};
            if (row.feasible) {
                r["x"] = row.x;
                r["n"] = row.n;
                if (table.extended) {
                    r["t"] = row.t;
                    r["f"] = row.f;
                    r["n_adjusted"] = row.n_adjusted;
                }
            }
            rows.push_back(std::move(r));
        }
        body = json{{"family", table.label}, {"rows", std::move(rows)}}.dump(2) + "\n";
    }
    emit(o, body, out);
    return warned ? kExitWarnings : kExitOk;
}

int cmd_curve(const Options& o, std::ostream& out, std::ostream& err) {
    if (o.samples < 2) {
        throw Error(ErrorCode::InvalidArgument, fmt::format("--samples must be >= 2, got {}", o.samples));
    }
    const Scenario s = resolve_scenario(o);
    const CalibratedCurve curve = calibrate(*s.curve);
    const bool warned = report_shape(curve, err);
    const Schedule r = solve_schedule({s.c_real, s.vc_a, curve});

    // Price line of constant contribution: (t - vc_a) f = c (p - vc_a) q.
    const double area = r.c_effective * (curve.p() - s.vc_a) * curve.q();
    const int places = o.round.value_or(6);

    std::string body;
    json samples = json::array();
    if (o.format != "json") {
        body = fmt::format("# solution f={},t={}\nf,nar,nmr,hyperbola\n", format_fixed(r.f, places),
                           format_fixed(r.t, places));
    }
    for (int i = 1; i <= o.samples; ++i) {
        const double f = curve.q() * static_cast<double>(i) / o.samples;
        const double nar = curve.nar(f);
        const double nmr = curve.nmr(f);
        const double hyp = area / f + s.vc_a;
        if (o.format == "json") {
            samples.push_back({{"f", f}, {"nar", nar}, {"nmr", nmr}, {"hyperbola", hyp}});
        } else {
            body += fmt::format("{},{},{},{}\n", format_fixed(f, places), format_fixed(nar, places),
                                format_fixed(nmr, places), format_fixed(hyp, places));
        }
    }
    if (o.format == "json") {
        body = json{{"solution", {{"f", r.f}, {"t", r.t}}}, {"samples", std::move(samples)}}.dump(2) + "\n";
    }
    emit(o, body, out);
    return warned ? kExitWarnings : kExitOk;
}

int cmd_validate(const Options& o, std::ostream& out, std::ostream& err) {
    const Scenario s = resolve_scenario(o);
    std::vector<std::string> lines;
    json findings = json::array();
    int warnings = 0;
    const auto finding = [&](std::string_view level, std::string_view code, const std::string& message) {
        lines.push_back(fmt::format("{}[{}]: {}", level, code, message));
        findings.push_back({{"level", level}, {"code", code}, {"message", message}});
        if (level == "warning") {
            ++warnings;
        }
    };

    lines.push_back(fmt::format("curve: {}", to_string(s.curve->family)));
    json report{{"family", std::string(to_string(s.curve->family))}};

    std::optional<CalibratedCurve> curve;
    try {
        curve = calibrate(*s.curve);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NoOptimum) {
            throw;
        }
        // Diagnose the raw samples over their own domain.
        const LagrangeInterpolant nar = lagrange_nar(std::get<std::vector<Sample>>(s.curve->params));
        double reference = 0.0;
        for (double v : nar.values()) {
            reference = std::max(reference, std::abs(v));
        }
        const NarShape shape = check_nar_shape([&nar](double f) { return nar(f); }, nar.max_abscissa(), reference);
        if (!shape.ok()) {
            finding("warning", "NotDecreasing",
                    fmt::format("sampled net average revenue rises by up to {:.6g} on (0, {}]", shape.worst_increase,
                                nar.max_abscissa()));
        }
        finding("warning", "NoOptimum", e.what());
    }

    if (curve) {
        lines.push_back(fmt::format("p: {}", format_fixed(curve->p(), 6)));
        lines.push_back(fmt::format("q: {}", format_fixed(curve->q(), 6)));
        const double c_max = max_feasible_c(*curve);
        lines.push_back(fmt::format("c_max: {}", format_fixed(c_max, 3)));
        report["p"] = curve->p();
        report["q"] = curve->q();
        report["c_max"] = c_max;

        const NarShape& shape = curve->shape();
        if (shape.ok()) {
            lines.emplace_back("nar shape: ok");
        } else {
            finding("warning", "NotDecreasing",
                    fmt::format("net average revenue is {} on (0, q]: min {:.6g}, largest rise {:.6g}",
                                shape.positive ? "not monotone" : "not positive", shape.min_nar,
                                shape.worst_increase));
        }

        // Self-tests: optimum residual and NMR = d(f nar)/df by central differences.
        const double p = curve->p();
        const double q = curve->q();
        bool self_ok = std::abs(curve->nmr(q)) < 1e-9 * p;
        const double h = 1e-5 * q;
        for (int i = 1; i < 16; ++i) {
            const double f = q * i / 16.0;
            const double fd = ((f + h) * curve->nar(f + h) - (f - h) * curve->nar(f - h)) / (2.0 * h);
            self_ok = self_ok && std::abs(curve->nmr(f) - fd) < 1e-6 * p;
        }

        try {
            const Schedule r = solve_schedule({s.c_real, s.vc_a, *curve});
            lines.push_back(fmt::format("c_real: {} feasible (c_effective {}, x {})", format_fixed(s.c_real, 3),
                                        format_fixed(r.c_effective, 3), format_fixed(r.x, 3)));
            report["c_real_feasible"] = true;
            if (s.vc_a == 0.0) {
                self_ok = self_ok && std::abs(r.t * r.x - r.c_effective * p) < 1e-9 * p;
                self_ok = self_ok && std::abs(r.t - curve->nmr(r.f)) < 1e-9 * p;
            }
        } catch (const Error& e) {
            finding("error", to_string(e.code()), e.what());
            report["c_real_feasible"] = false;
        }

        if (self_ok) {
            lines.emplace_back("self-tests: ok");
        } else {
            finding("warning", "InvariantFailed", "optimum, derivative or tangency self-test out of tolerance");
        }
    }

    bool errored = false;
    for (const auto& f : findings) {
        if (f["level"] == "error") {
            errored = true;
            err << "error[" << f["code"].get<std::string>() << "]: " << f["message"].get<std::string>() << '\n';
        }
    }

    std::string body;
    if (o.format == "json") {
        report["findings"] = std::move(findings);
        body = report.dump(2) + "\n";
    } else {
        for (const auto& l : lines) {
            body += l + "\n";
        }
    }
    emit(o, body, out);
    if (errored) {
        return kExitError;
    }
    return warnings > 0 ? kExitWarnings : kExitOk;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Cost-plus transfer price schedules for linear, quadratic, exponential and sampled NAR curves",
                 "tprice"};
    app.require_subcommand(1);

    Options solve_opts;
    Options table_opts;
    Options curve_opts;
    Options validate_opts;

    auto* solve = app.add_subcommand("solve", "Solve one schedule (x, f, t, n)");
    add_common(solve, solve_opts, "text");

    auto* table = app.add_subcommand("table", "Sweep (c, x, n) over a grid of target shares");
    add_common(table, table_opts, "csv");
    table->add_option("--grid", table_opts.grid, "start:stop:step or v1,v2,...");
    table->add_option("--paper-table", table_opts.paper_table, "Reproduce published table 1, 3 or 4")
        ->check(CLI::IsMember({1, 3, 4}));
    table->add_option("--round", table_opts.round, "Decimal places")->check(CLI::Range(0, 12));

    auto* curve = app.add_subcommand("curve", "Export NAR, NMR and price-line samples for plotting");
    add_common(curve, curve_opts, "csv");
    curve->add_option("--samples", curve_opts.samples, "Number of samples over (0, q]");
    curve->add_option("--round", curve_opts.round, "Decimal places")->check(CLI::Range(0, 15));

    auto* validate = app.add_subcommand("validate", "Check a scenario's curve, feasibility and invariants");
    add_common(validate, validate_opts, "text");

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        const auto subs = app.get_subcommands();
        out << (subs.empty() ? app.help() : subs.front()->help());
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error[Usage]: " << e.what() << '\n';
        return kExitError;
    }

    try {
        if (solve->parsed()) {
            return cmd_solve(solve_opts, out, err);
        }
        if (table->parsed()) {
            return cmd_table(table_opts, out, err);
        }
        if (curve->parsed()) {
            return cmd_curve(curve_opts, out, err);
        }
        return cmd_validate(validate_opts, out, err);
    } catch (const Error& e) {
        err << "error[" << to_string(e.code()) << "]: " << e.what() << '\n';
        return kExitError;
    }
}

}  // namespace tprice::cli
