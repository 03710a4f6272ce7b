#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "tprice/cli.hpp"
#include "tprice/error.hpp"
#include "tprice/scenario.hpp"
#include "tprice/schedule.hpp"

using namespace tprice;
using nlohmann::json;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "tprice");
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string scenario_path(const std::string& name) {
    return std::string(TPRICE_GOLDEN_DIR) + "/../scenarios/" + name;
}

std::filesystem::path write_temp(const std::string& name, const std::string& content) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path) << content;
    return path;
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> csv_row(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        cells.push_back(cell);
    }
    return cells;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::stringstream ss(text);
    std::string l;
    while (std::getline(ss, l)) {
        lines.push_back(l);
    }
    return lines;
}

}  // namespace

// solve

TEST(CliSolve, WorkedExampleFromFlags) {
    const auto r = run({"solve", "--family", "quadratic", "--p", "100", "--q", "1000", "--c-real", "0.4", "--vc-a",
                        "20"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("42.15"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("(1.1%)"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("0.250"), std::string::npos) << r.out;
}

TEST(CliSolve, WorkedExampleFromScenarioWithCurrencyLabel) {
    const auto r = run({"solve", "--scenario", scenario_path("worked_example.json")});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("GBP 42.15"), std::string::npos) << r.out;
}

TEST(CliSolve, ZeroTargetLinear) {
    const auto r = run({"solve", "--family", "linear", "--p", "1", "--q", "1", "--c-real", "0", "--format", "csv"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto lines = lines_of(r.out);
    ASSERT_EQ(lines.size(), 2u);
    const auto head = csv_row(lines[0]);
    const auto row = csv_row(lines[1]);
    const auto col = [&](const std::string& name) {
        return row[std::find(head.begin(), head.end(), name) - head.begin()];
    };
    EXPECT_EQ(col("x"), "1.000");
    EXPECT_EQ(col("t"), "0.00");
    EXPECT_EQ(col("n"), "0.000");
}

TEST(CliSolve, ExponentialJson) {
    const auto r = run({"solve", "--family", "exponential", "--p", "100", "--q", "500", "--c-real", "0.30",
                        "--format", "json"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = json::parse(r.out);
    const auto& s = j.at("schedule");
    EXPECT_NEAR(s.at("x").get<double>(), 0.680, 5e-4);
    EXPECT_NEAR(s.at("f").get<double>(), 340.0, 0.5);
    EXPECT_NEAR(s.at("t").get<double>(), 100.0 * 0.30 / s.at("x").get<double>(), 1e-9);
    EXPECT_NEAR(s.at("t").get<double>(), 44.12, 0.05);
    EXPECT_NEAR(s.at("n").get<double>(), 0.064, 5e-4);
}

TEST(CliSolve, JsonRoundTripsThroughScenario) {
    const auto first = run({"solve", "--scenario", scenario_path("sampled_quadratic.json"), "--format", "json"});
    ASSERT_EQ(first.code, 0) << first.err;
    const auto j1 = json::parse(first.out);
    const auto path = write_temp("tprice_roundtrip.json", j1.at("scenario").dump());
    const auto second = run({"solve", "--scenario", path.string(), "--format", "json"});
    ASSERT_EQ(second.code, 0) << second.err;
    const auto j2 = json::parse(second.out);
    for (const char* key : {"c_effective", "c_max", "x", "f", "t", "n", "n_adjusted"}) {
        EXPECT_NEAR(j1["schedule"][key].get<double>(), j2["schedule"][key].get<double>(), 1e-12) << key;
    }
    EXPECT_EQ(first.out, second.out);
}

TEST(CliSolve, DomainErrorsExitTwoWithCodePrefix) {
    const auto infeasible = run({"solve", "--family", "linear", "--c-real", "0.6"});
    EXPECT_EQ(infeasible.code, 2);
    EXPECT_EQ(infeasible.err.rfind("error[CExceedsFeasible]: ", 0), 0u) << infeasible.err;
    EXPECT_EQ(std::count(infeasible.err.begin(), infeasible.err.end(), '\n'), 1);

    const auto vc = run({"solve", "--family", "linear", "--p", "10", "--c-real", "0.3", "--vc-a", "10"});
    EXPECT_EQ(vc.code, 2);
    EXPECT_EQ(vc.err.rfind("error[VariableCostTooHigh]", 0), 0u) << vc.err;

    const auto neg = run({"solve", "--family", "linear", "--p", "10", "--c-real", "0.1", "--vc-a", "2"});
    EXPECT_EQ(neg.code, 2);
    EXPECT_EQ(neg.err.rfind("error[NegativeEffectiveContribution]", 0), 0u) << neg.err;
}

TEST(CliSolve, MalformedScenariosExitTwo) {
    const auto missing_b = run({"solve", "--scenario", scenario_path("malformed.json")});
    EXPECT_EQ(missing_b.code, 2);
    EXPECT_EQ(missing_b.err.rfind("error[MalformedScenario]", 0), 0u) << missing_b.err;

    const auto not_json = write_temp("tprice_bad.json", "{\"curve\": ");
    EXPECT_EQ(run({"solve", "--scenario", not_json.string()}).code, 2);

    const auto unknown = write_temp("tprice_unknown.json", R"({"curve":{"family":"cubic","p":1,"q":1}})");
    EXPECT_EQ(run({"solve", "--scenario", unknown.string()}).code, 2);

    const auto both = write_temp("tprice_both.json", R"({"curve":{"family":"linear","a":1,"b":1,"p":1,"q":1}})");
    EXPECT_EQ(run({"solve", "--scenario", both.string()}).code, 2);

    EXPECT_EQ(run({"solve", "--scenario", "/nonexistent/tprice.json"}).code, 2);
    EXPECT_EQ(run({"solve"}).code, 2);
    EXPECT_EQ(run({"solve", "--family", "points"}).code, 2);
}

TEST(CliSolve, UsageErrorsExitTwo) {
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"bogus"}).code, 2);
    EXPECT_EQ(run({"solve", "--family", "cubic"}).code, 2);
    EXPECT_EQ(run({"solve", "--family", "linear", "--format", "yaml"}).code, 2);
    const auto r = run({"solve", "--p", "abc"});
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(r.err.rfind("error[Usage]", 0), 0u);
}

TEST(CliSolve, FlagsOverrideScenario) {
    const auto r = run({"solve", "--scenario", scenario_path("worked_example.json"), "--vc-a", "0", "--c-real", "0.25",
                        "--format", "json"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto s = json::parse(r.out).at("schedule");
    EXPECT_EQ(s.at("c_effective").get<double>(), 0.25);
    EXPECT_NEAR(s.at("t").get<double>(), 100.0 * 0.25 / s.at("x").get<double>(), 1e-9);
}

TEST(CliSolve, WritesToOutFile) {
    const auto path = std::filesystem::temp_directory_path() / "tprice_out.txt";
    std::filesystem::remove(path);
    const auto r = run({"solve", "--family", "quadratic", "--c-real", "0.25", "--out", path.string()});
    EXPECT_EQ(r.code, 0);
    EXPECT_TRUE(r.out.empty());
    EXPECT_NE(read_file(path).find("0.903"), std::string::npos);
}

// table

TEST(CliTable, PaperTablesAreByteStable) {
    for (const char* which : {"1", "3", "4"}) {
        const auto a = run({"table", "--paper-table", which});
        const auto b = run({"table", "--paper-table", which});
        ASSERT_EQ(a.code, 0) << a.err;
        EXPECT_EQ(a.out, b.out);
        EXPECT_EQ(a.out, read_file(std::string(TPRICE_GOLDEN_DIR) + "/table" + which + ".csv"));
    }
}

TEST(CliTable, PaperTableThreeHasThirteenRows) {
    const auto r = run({"table", "--paper-table", "3"});
    EXPECT_EQ(lines_of(r.out).size(), 14u);
}

TEST(CliTable, LinearRangeGrid) {
    const auto r = run({"table", "--family", "linear", "--grid", "0.5:0.0:-0.05"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto lines = lines_of(r.out);
    ASSERT_EQ(lines.size(), 12u);
    EXPECT_EQ(lines[0], "c,x,n");
    double prev_x = 0.0;
    double prev_n = 1.0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto cells = csv_row(lines[i]);
        const double c = std::stod(cells[0]);
        const double x = std::stod(cells[1]);
        const double n = std::stod(cells[2]);
        const double x_exact = 0.5 + std::sqrt(std::max(0.0, 0.25 - 0.5 * c));
        EXPECT_NEAR(x, x_exact, 5e-4);
        EXPECT_NEAR(n, (1 - x_exact) * (1 - x_exact), 5e-4);
        EXPECT_GT(x, prev_x);
        EXPECT_LE(n, prev_n);
        prev_x = x;
        prev_n = n;
    }
}

TEST(CliTable, InfeasibleSingleRow) {
    const auto r = run({"table", "--family", "quadratic", "--grid", "0.6"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "c,x,n\n0.600,infeasible,infeasible\n");
}

TEST(CliTable, MalformedGridsExitTwo) {
    EXPECT_EQ(run({"table", "--family", "linear", "--grid", "0.5:0.0"}).code, 2);
    EXPECT_EQ(run({"table", "--family", "linear", "--grid", "0.5:0.0:0.05"}).code, 2);
    EXPECT_EQ(run({"table", "--family", "linear", "--grid", "0.5:0.0:0"}).code, 2);
    EXPECT_EQ(run({"table", "--family", "linear", "--grid", "0.1,abc"}).code, 2);
    EXPECT_EQ(run({"table", "--family", "linear"}).code, 2);
    EXPECT_EQ(run({"table", "--paper-table", "2"}).code, 2);
}

TEST(CliTable, ScenarioSweepIsExtended) {
    const auto r = run({"table", "--scenario", scenario_path("sampled_quadratic.json")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto lines = lines_of(r.out);
    EXPECT_EQ(lines[0], "c,x,t,f,n,n_adjusted");
    EXPECT_EQ(lines.size(), 7u);
}

TEST(CliTable, TextAndRounding) {
    const auto r = run({"table", "--family", "quadratic", "--grid", "0.25", "--round", "4", "--format", "text"});
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("0.9030"), std::string::npos) << r.out;
}

// curve

TEST(CliCurve, OptimumRowHasUnitNarAndZeroNmr) {
    const auto r = run({"curve", "--family", "quadratic", "--c-real", "0.25", "--samples", "4", "--format", "json"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = json::parse(r.out);
    const auto& last = j.at("samples").back();
    EXPECT_NEAR(last.at("f").get<double>(), 1.0, 1e-12);
    EXPECT_NEAR(last.at("nar").get<double>(), 1.0, 1e-9);
    EXPECT_NEAR(last.at("nmr").get<double>(), 0.0, 1e-9);
    EXPECT_EQ(j.at("samples").size(), 4u);
}

TEST(CliCurve, PriceLineMeetsNmrAtSolution) {
    const auto r = run({"curve", "--family", "quadratic", "--c-real", "0.25", "--format", "json"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto sol = json::parse(r.out).at("solution");
    const double f = sol.at("f").get<double>();
    const double t = sol.at("t").get<double>();
    EXPECT_NEAR(f, 0.903, 5e-4);
    EXPECT_NEAR(t, 0.25 / f, 1e-12);
    EXPECT_NEAR(t, 0.2769, 1e-4);
    EXPECT_NEAR(t, 1.5 - 1.5 * f * f, 1e-3);
}

TEST(CliCurve, ExponentialCsvSamples) {
    const auto r = run({"curve", "--family", "exponential", "--samples", "2"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto lines = lines_of(r.out);
    ASSERT_EQ(lines.size(), 4u);
    EXPECT_EQ(lines[0].rfind("# solution f=", 0), 0u);
    EXPECT_EQ(lines[1], "f,nar,nmr,hyperbola");
    const auto first = csv_row(lines[2]);
    EXPECT_EQ(first[0], "0.500000");
    EXPECT_NEAR(std::stod(first[1]), std::exp(0.5), 1e-6);
    EXPECT_EQ(csv_row(lines[3])[0], "1.000000");
}

TEST(CliCurve, RejectsTooFewSamples) {
    EXPECT_EQ(run({"curve", "--family", "linear", "--samples", "1"}).code, 2);
}

// validate

TEST(CliValidate, ReportsClosedFormBounds) {
    const auto quad = run({"validate", "--family", "quadratic"});
    EXPECT_EQ(quad.code, 0) << quad.err;
    EXPECT_NE(quad.out.find("c_max: 0.577"), std::string::npos) << quad.out;

    const auto lin = run({"validate", "--family", "linear"});
    EXPECT_EQ(lin.code, 0);
    EXPECT_NE(lin.out.find("c_max: 0.500"), std::string::npos) << lin.out;
}

TEST(CliValidate, IncreasingSamplesWarn) {
    const auto r = run({"validate", "--scenario", scenario_path("increasing_points.json")});
    EXPECT_EQ(r.code, 1) << r.out << r.err;
    EXPECT_NE(r.out.find("warning[NotDecreasing]"), std::string::npos) << r.out;
}

TEST(CliValidate, InfeasibleTargetIsAnError) {
    const auto r = run({"validate", "--family", "exponential", "--c-real", "0.5", "--format", "json"});
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(r.err.rfind("error[CExceedsFeasible]", 0), 0u) << r.err;
    const auto j = json::parse(r.out);
    EXPECT_FALSE(j.at("c_real_feasible").get<bool>());
}

TEST(CliValidate, MalformedInputExitsTwo) {
    EXPECT_EQ(run({"validate", "--scenario", scenario_path("malformed.json")}).code, 2);
    const auto dup = write_temp("tprice_dup.json", R"({"curve":{"family":"points","points":[[0,1],[0,2],[1,0.5]]}})");
    EXPECT_EQ(run({"validate", "--scenario", dup.string()}).code, 2);
}

TEST(Cli, IdenticalInputsGiveIdenticalOutput) {
    const std::vector<std::vector<std::string>> cmds{
        {"solve", "--scenario", scenario_path("sampled_quadratic.json"), "--format", "json"},
        {"table", "--scenario", scenario_path("sampled_quadratic.json"), "--format", "text"},
        {"curve", "--family", "exponential", "--c-real", "0.2"},
        {"validate", "--scenario", scenario_path("worked_example.json")},
    };
    for (const auto& cmd : cmds) {
        EXPECT_EQ(run(cmd).out, run(cmd).out) << cmd[0];
    }
}

TEST(Scenario, GridParsing) {
    const auto range = expand_sweep(parse_grid("0.5:0.0:-0.05"));
    ASSERT_EQ(range.size(), 11u);
    EXPECT_EQ(range.back(), 0.0);
    const auto list = expand_sweep(parse_grid("0.3,0.1,0.2"));
    EXPECT_EQ(list, (std::vector<double>{0.3, 0.1, 0.2}));
}

TEST(Scenario, FileSweepUsesPositiveStep) {
    const auto s = parse_scenario(json::parse(R"({"sweep":{"start":0.4,"stop":0.0,"step":0.1}})"));
    ASSERT_TRUE(s.sweep.has_value());
    EXPECT_EQ(expand_sweep(*s.sweep).size(), 5u);
    EXPECT_THROW((void)parse_scenario(json::parse(R"({"sweep":{"start":0.4,"stop":0.0,"step":-0.1}})")), Error);
}
