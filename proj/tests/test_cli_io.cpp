#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "dante/cli_io.hpp"
#include "oracles/golden_values.hpp"

using namespace dante::cli;
using nlohmann::json;
namespace golden = dante::golden;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run_cli(const std::vector<std::string>& args,
               const std::map<std::string, std::string>& env = {}) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = main_entry(args, out, err, [&env](const char* name) -> const char* {
        const auto it = env.find(name);
        return it == env.end() ? nullptr : it->second.c_str();
    });
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    for (std::string cell; std::getline(in, cell, ',');) out.push_back(cell);
    return out;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class TempDir {
public:
    TempDir() {
        path_ = std::filesystem::temp_directory_path() /
                ("dante_cli_test_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                 "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
        std::filesystem::create_directories(path_);
    }
    ~TempDir() { std::filesystem::remove_all(path_); }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

void expect_error(const Result& r, int code, const std::string& kind) {
    EXPECT_EQ(r.code, code) << r.err;
    EXPECT_TRUE(r.out.empty());
    const auto j = json::parse(r.err);
    EXPECT_EQ(j.at("error"), kind);
    EXPECT_FALSE(j.at("message").get<std::string>().empty());
}

}  // namespace

TEST(FormatNumber, ShortestRoundTrip) {
    EXPECT_EQ(format_number(0.0), "0");
    EXPECT_EQ(format_number(1.0), "1");
    EXPECT_EQ(format_number(0.1), "0.1");
    EXPECT_EQ(format_number(-2.5), "-2.5");
    EXPECT_EQ(format_number(1e-300), "1e-300");
    const double third = 1.0 / 3.0;
    EXPECT_EQ(std::stod(format_number(third)), third);
    EXPECT_THROW(format_number(NAN), NonFiniteOutput);
    EXPECT_THROW(format_number(INFINITY), NonFiniteOutput);
}

TEST(CliCurvature, JsonValues) {
    const auto r = run_cli({"curvature", "--a", "1", "--b", "1", "--c", "2"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_TRUE(r.err.empty());
    const auto j = json::parse(r.out);
    EXPECT_EQ(j.at("kappa1"), 1.0);
    EXPECT_EQ(j.at("kappa3"), -1.0);
    EXPECT_EQ(j.at("ricci11"), 0.0);
    EXPECT_EQ(j.at("ricci33"), 2.0);
    EXPECT_EQ(j.at("scalar"), 2.0);
    EXPECT_EQ(j.at("connection3"), 0.0);
    EXPECT_EQ(j.at("r_squared"), 4.0);
}

TEST(CliCurvature, CsvIsOneRow) {
    const auto r = run_cli({"curvature", "--a", "1", "--b", "1", "--c", "1", "--format", "csv"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto l = lines_of(r.out);
    ASSERT_EQ(l.size(), 2u);
    EXPECT_EQ(split(l[0]).size(), split(l[1]).size());
    EXPECT_EQ(split(l[0])[0], "a");
}

TEST(CliCurvature, RSquaredFromOptionAndEnvironment) {
    const auto opt = json::parse(
        run_cli({"curvature", "--a", "1", "--b", "1", "--c", "2", "--r2", "8"}).out);
    EXPECT_EQ(opt.at("ricci33"), 1.0);
    const auto env = json::parse(
        run_cli({"curvature", "--a", "1", "--b", "1", "--c", "2"}, {{"DANTE_FLOW_R2", "8"}}).out);
    EXPECT_EQ(env.at("ricci33"), 1.0);
    // The option wins over the environment.
    const auto both = json::parse(run_cli({"curvature", "--a", "1", "--b", "1", "--c", "2",
                                           "--r2", "4"},
                                          {{"DANTE_FLOW_R2", "8"}})
                                      .out);
    EXPECT_EQ(both.at("ricci33"), 2.0);
    expect_error(run_cli({"curvature", "--a", "1", "--b", "1", "--c", "2"},
                         {{"DANTE_FLOW_R2", "abc"}}),
                 kExitUsage, "usage_error");
}

TEST(CliClassify, SnakeAndSigns) {
    const auto r = run_cli({"classify", "--a", "1", "--b", "1", "--c", "2"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto j = json::parse(r.out);
    EXPECT_EQ(j.at("shape"), "snake");
    EXPECT_EQ(j.at("ricci_signs"), json::array({0, 0, 1}));
    EXPECT_EQ(j.at("curvature_signs"), json::array({1, 1, -1}));
    EXPECT_EQ(j.at("x"), 1.0);
    EXPECT_EQ(j.at("y"), 0.0);
    EXPECT_EQ(json::parse(run_cli({"classify", "--a", "1", "--b", "1.5", "--c", "2"}).out)
                  .at("shape"),
              "dragon");
    EXPECT_EQ(json::parse(run_cli({"classify", "--a", "1", "--b", "1.000001", "--c", "2",
                                   "--eq-tol", "1e-5"})
                              .out)
                  .at("shape"),
              "snake");
}

TEST(CliSimulate, IsotropicTableAndSummary) {
    TempDir dir;
    const auto table = dir / "t.csv";
    const auto r = run_cli({"simulate", "--a", "1", "--b", "1", "--c", "1", "--grid", "11",
                            "--output", table.string()});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto summary = json::parse(r.out);
    EXPECT_NEAR(summary.at("collapse_time").get<double>(), 1.0, 1e-9);
    EXPECT_EQ(summary.at("terminated"), "collapsed");

    const auto l = lines_of(slurp(table));
    ASSERT_GE(l.size(), 12u);
    EXPECT_EQ(l[0], "t,u,v,w,a,b,c,x,y,kappa1,kappa2,kappa3,ricci11,ricci22,ricci33,scalar");
    double prev_t = -1.0;
    for (std::size_t i = 1; i < l.size(); ++i) {
        const auto cells = split(l[i]);
        ASSERT_EQ(cells.size(), 16u);
        const double t = std::stod(cells[0]);
        ASSERT_GT(t, prev_t);
        prev_t = t;
        ASSERT_NEAR(std::stod(cells[1]), 1.0 - t, 1e-9);
    }
}

TEST(CliSimulate, AcceptsShapeCoordinatesAndIsDeterministic) {
    const std::vector<std::string> args{"simulate", "--x", "0.75", "--y", "0.25", "--grid", "5"};
    const auto a = run_cli(args);
    const auto b = run_cli(args);
    ASSERT_EQ(a.code, kExitOk) << a.err;
    EXPECT_EQ(a.out, b.out);
    const auto first = split(lines_of(a.out)[1]);
    EXPECT_EQ(first[7], "0.75");
    EXPECT_EQ(first[8], "0.25");
}

TEST(CliSimulate, JsonWrapper) {
    const auto r = run_cli({"simulate", "--a", "1", "--b", "1", "--c", "2", "--grid", "3",
                            "--format", "json"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto j = json::parse(r.out);
    EXPECT_EQ(j.at("columns").size(), 16u);
    EXPECT_GE(j.at("rows").size(), 3u);
    EXPECT_EQ(j.at("rows")[0].size(), 16u);
    EXPECT_TRUE(j.at("summary").contains("collapse_time"));
}

TEST(CliSnake, TableMatchesGoldenAndCheck) {
    TempDir dir;
    const auto summary_path = dir / "s.json";
    const auto r = run_cli({"snake", "--W", "1", "--alpha", "1", "--grid", "2", "--check",
                            "--summary", summary_path.string()});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto l = lines_of(r.out);
    // lambda = 1, 1/2; the collapse point lambda = 0 is not tabulated.
    ASSERT_EQ(l.size(), 3u);
    EXPECT_EQ(l[0], "lambda,t,w,v");
    EXPECT_EQ(l[1], "1,0,1,0.5");
    const auto mid = split(l[2]);
    EXPECT_EQ(mid[0], "0.5");
    EXPECT_NEAR(std::stod(mid[1]), golden::kSnakeTimeW1Alpha1Lambda0p5, 1e-15);

    const auto s = json::parse(slurp(summary_path));
    EXPECT_NEAR(s.at("collapse_time").get<double>(), golden::kSnakeCollapseW1Alpha1, 1e-15);
    EXPECT_LT(s.at("collapse_time_deviation").get<double>(), 1e-8);
    EXPECT_LT(s.at("max_time_deviation").get<double>(), 1e-8);
}

TEST(CliTurtle, CollapseTime) {
    const auto r = run_cli({"turtle", "--U", "0.75", "--beta", "0.5", "--format", "json"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto j = json::parse(r.out);
    EXPECT_NEAR(j.at("summary").at("collapse_time").get<double>(),
                golden::kTurtleCollapseU0p75Beta0p5, 1e-15);
    EXPECT_EQ(j.at("columns"), json::array({"mu", "t", "u", "v"}));
    EXPECT_EQ(j.at("rows").size(), kDefaultTimeGrid);
}

TEST(CliFlowlines, LatticeAndStartsFile) {
    TempDir dir;
    const auto starts = dir / "starts.csv";
    {
        std::ofstream f(starts);
        f << "x,y\n0.5,0.25\n1.0,0.5\n";
    }
    const auto table = dir / "lines.csv";
    const auto r = run_cli({"flowlines", "--starts", starts.string(), "--output", table.string()});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto s = json::parse(r.out);
    ASSERT_EQ(s.at("lines").size(), 2u);
    for (const auto& line : s.at("lines")) {
        EXPECT_TRUE(line.at("apex_bracketed").get<bool>());
        EXPECT_NEAR(line.at("apex_radius").get<double>(), std::sqrt(2.0), 1e-4);
        EXPECT_NEAR(line.at("end_x").get<double>(), 2.0, 1e-4);
    }
    const auto l = lines_of(slurp(table));
    EXPECT_EQ(l[0], "line_id,x,y,t");
    EXPECT_EQ(split(l[1])[0], "0");
    EXPECT_EQ(split(l.back())[0], "1");

    const auto lattice = run_cli({"flowlines", "--grid", "2", "--format", "json"});
    ASSERT_EQ(lattice.code, kExitOk) << lattice.err;
    EXPECT_EQ(json::parse(lattice.out).at("summary").at("lines").size(), 4u);
}

TEST(CliRegions, Boundaries) {
    const auto r = run_cli({"regions", "--resolution", "16"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto l = lines_of(r.out);
    ASSERT_EQ(l.size(), 1u + 3u * 16u);
    EXPECT_EQ(l[0], "boundary,x,y");
    EXPECT_EQ(l[1], "CE,0.5,0");
    expect_error(run_cli({"regions", "--resolution", "4"}), kExitDomain, "domain_error");
}

TEST(CliErrors, UsageErrors) {
    expect_error(run_cli({}), kExitUsage, "usage_error");
    expect_error(run_cli({"bogus"}), kExitUsage, "usage_error");
    expect_error(run_cli({"curvature", "--a", "1"}), kExitUsage, "usage_error");
    expect_error(run_cli({"curvature", "--a", "x", "--b", "1", "--c", "1"}), kExitUsage, "usage_error");
    expect_error(run_cli({"snake", "--W", "1"}), kExitUsage, "usage_error");
    expect_error(run_cli({"flowlines", "--starts", "/nonexistent/dante/starts.csv"}), kExitUsage,
                 "usage_error");
}

TEST(CliErrors, DomainErrors) {
    expect_error(run_cli({"curvature", "--a", "0", "--b", "1", "--c", "1"}), kExitDomain,
                 "domain_error");
    expect_error(run_cli({"simulate", "--a", "2", "--b", "1", "--c", "3"}), kExitDomain,
                 "domain_error");
    expect_error(run_cli({"turtle", "--U", "1", "--beta", "1"}), kExitDomain, "domain_error");
    expect_error(run_cli({"simulate", "--x", "0.5", "--y", "0.5"}), kExitDomain, "domain_error");
}

TEST(CliErrors, IntegrationFailure) {
    const auto r = run_cli({"simulate", "--a", "1", "--b", "1.5", "--c", "2", "--rel-tol",
                            "1e-300", "--abs-tol", "1e-300"});
    EXPECT_EQ(r.code, kExitIntegration) << r.err;
    EXPECT_EQ(json::parse(r.err).at("error"), "integration_failure");
}

TEST(CliHelp, PrintsAndSucceeds) {
    const auto r = run_cli({"--help"});
    EXPECT_EQ(r.code, kExitOk);
    EXPECT_NE(r.out.find("simulate"), std::string::npos);
}
