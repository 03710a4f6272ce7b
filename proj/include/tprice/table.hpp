#pragma once

#include <span>
#include <string>
#include <vector>

#include "tprice/schedule.hpp"

namespace tprice {

/// Decimal places used when a table is rendered. Computation is always at
/// full precision.
struct Rounding {
    int c_places = 3;
    int x_places = 3;
    int n_places = 3;
    int money_places = 2;
    int quantity_places = 2;

    static Rounding uniform(int places) { return {places, places, places, 2, 2}; }
};

struct SweepRow {
    double c = 0.0;
    bool feasible = true;
    double x = 0.0;
    double n = 0.0;
    // Filled only in extended mode.
    double t = 0.0;
    double f = 0.0;
    double n_adjusted = 0.0;
};

struct SweepTable {
    std::string label;
    std::vector<SweepRow> rows;  // descending c
    Rounding rounding;
    bool extended = false;
};

struct SweepOptions {
    double vc_a = 0.0;
    bool extended = false;
    Rounding rounding;
};

/// One row per requested c, sorted by descending c. Rows whose c cannot be
/// met (above c_max, below variable-cost recovery, outside [0, 1)) are kept
/// and marked infeasible. Throws only for errors that apply to every row
/// (variable cost at or above p).
[[nodiscard]] SweepTable sweep(const CalibratedCurve& curve, std::span<const double> c_values,
                               const SweepOptions& options = {});

enum class PaperTable { Table1, Table3, Table4 };

/// The c abscissae of the published tables, in printed order.
[[nodiscard]] std::vector<double> paper_table_abscissae(PaperTable which);

/// Linear (Table 1), quadratic (Table 3) or exponential (Table 4) sweep at
/// the published abscissae and rounding.
[[nodiscard]] SweepTable paper_table(PaperTable which);

/// Fixed-point rendering with round-half-away-from-zero; never prints "-0".
[[nodiscard]] std::string format_fixed(double value, int places);

/// Header `c,x,n` (or `c,x,t,f,n,n_adjusted` when extended), newline-terminated rows.
[[nodiscard]] std::string render_csv(const SweepTable& table);

/// Right-aligned columns for terminals.
[[nodiscard]] std::string render_text(const SweepTable& table);

}  // namespace tprice
