#include "tprice/table.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "tprice/error.hpp"

namespace tprice {

namespace {

std::vector<std::string> header(const SweepTable& table) {
    if (table.extended) {
        return {"c", "x", "t", "f", "n", "n_adjusted"};
    }
    return {"c", "x", "n"};
}

std::vector<std::string> cells(const SweepTable& table, const SweepRow& row) {
    const Rounding& r = table.rounding;
    std::vector<std::string> out{format_fixed(row.c, r.c_places)};
    const std::size_t width = header(table).size();
    if (!row.feasible) {
        out.resize(width, "infeasible");
        return out;
    }
    out.push_back(format_fixed(row.x, r.x_places));
    if (table.extended) {
        out.push_back(format_fixed(row.t, r.money_places));
        out.push_back(format_fixed(row.f, r.quantity_places));
        out.push_back(format_fixed(row.n, r.n_places));
        out.push_back(format_fixed(row.n_adjusted, r.n_places));
    } else {
        out.push_back(format_fixed(row.n, r.n_places));
    }
    return out;
}

}  // namespace

SweepTable sweep(const CalibratedCurve& curve, std::span<const double> c_values, const SweepOptions& options) {
    SweepTable table;
    table.label = std::string(to_string(curve.family()));
    table.rounding = options.rounding;
    table.extended = options.extended;
    table.rows.reserve(c_values.size());

    ScheduleRequest request{0.0, options.vc_a, curve};
    for (double c : c_values) {
        SweepRow row;
        row.c = c;
        request.c_real = c;
        try {
            const Schedule s = solve_schedule(request);
            row.x = s.x;
            row.n = s.n;
            row.t = s.t;
            row.f = s.f;
            row.n_adjusted = s.n_adjusted;
        } catch (const Error& e) {
            if (e.code() == ErrorCode::VariableCostTooHigh) {
                throw;
            }
            row.feasible = false;
        }
        table.rows.push_back(row);
    }
    std::stable_sort(table.rows.begin(), table.rows.end(),
                     [](const SweepRow& a, const SweepRow& b) { return a.c > b.c; });
    return table;
}

std::vector<double> paper_table_abscissae(PaperTable which) {
    switch (which) {
        case PaperTable::Table1: return {0.50, 0.48, 0.46, 0.42, 0.38, 0.32, 0.26, 0.18, 0.09, 0.00};
        case PaperTable::Table3:
            return {0.57, 0.55, 0.50, 0.45, 0.40, 0.35, 0.30, 0.25, 0.20, 0.15, 0.10, 0.05, 0.00};
        case PaperTable::Table4:
            return {0.43, 0.42, 0.40, 0.38, 0.36, 0.34, 0.32, 0.30, 0.28, 0.26, 0.24, 0.22,
                    0.20, 0.18, 0.16, 0.14, 0.12, 0.10, 0.08, 0.06, 0.04, 0.02, 0.00};
    }
    return {};
}

SweepTable paper_table(PaperTable which) {
    Family family = Family::Linear;
    Rounding rounding{2, 3, 3, 2, 2};
    switch (which) {
        case PaperTable::Table1:
            family = Family::Linear;
            rounding.x_places = 2;
            break;
        case PaperTable::Table3: family = Family::Quadratic; break;
        case PaperTable::Table4: family = Family::Exponential; break;
    }
    const auto cs = paper_table_abscissae(which);
    SweepOptions options;
    options.rounding = rounding;
    return sweep(CalibratedCurve::closed_form(family, 1.0, 1.0), cs, options);
}

std::string format_fixed(double value, int places) {
    if (!std::isfinite(value)) {
        return fmt::format("{}", value);
    }
    const double scale = std::pow(10.0, places);
    double rounded = std::round(value * scale) / scale;
    if (rounded == 0.0) {
        rounded = 0.0;
    }
    return fmt::format("{:.{}f}", rounded, places);
}

std::string render_csv(const SweepTable& table) {
    std::string out = fmt::format("{}\n", fmt::join(header(table), ","));
    for (const auto& row : table.rows) {
        out += fmt::format("{}\n", fmt::join(cells(table, row), ","));
    }
    return out;
}

std::string render_text(const SweepTable& table) {
    std::vector<std::vector<std::string>> grid{header(table)};
    for (const auto& row : table.rows) {
        grid.push_back(cells(table, row));
    }
    std::vector<std::size_t> widths(grid.front().size(), 0);
    for (const auto& line : grid) {
        for (std::size_t i = 0; i < line.size(); ++i) {
            widths[i] = std::max(widths[i], line[i].size());
        }
    }
    std::string out;
    for (const auto& line : grid) {
        for (std::size_t i = 0; i < line.size(); ++i) {
            out += fmt::format("{}{:>{}}", i == 0 ? "" : "  ", line[i], widths[i]);
        }
        out += '\n';
    }
    return out;
}

}  // namespace tprice
