#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "fgi/cli/commands.hpp"
#include "fgi/cli/config.hpp"
#include "fgi/cli/set_parser.hpp"
#include "fgi/cli/table.hpp"
#include "fgi/suites.hpp"

using namespace fgi;
using namespace fgi::cli;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run_cli(const std::string& args) {
    const std::string cmd = std::string(FGI_CLI_PATH) + " " + args + " 2>/dev/null";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf;
    std::size_t n = 0;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (ch == '"') {
                quoted = false;
            } else {
                cur += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

std::string column(const std::vector<std::string>& rows, std::size_t row, const std::string& name) {
    const auto header = split_csv(rows.at(1));
    const auto values = split_csv(rows.at(row));
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return values.at(i);
    }
    return "";
}

std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("fgi_test_" + std::to_string(::getpid()) + "_" + name);
}

}  // namespace

TEST(ParseSet, Examples) {
    EXPECT_EQ(parse_set("(-inf,0)").set, GaussianSet::left_halfline(0.0));
    EXPECT_EQ(parse_set("(0,1)|(1,2)").set, (GaussianSet{{0.0, 2.0}}));
    EXPECT_EQ(parse_set("  ( -1.5 , 2e-1 ) | ( 3 , inf ) ").set, (GaussianSet{{-1.5, 0.2}, {3.0, kInf}}));
    try {
        parse_set("(2,1)");
        FAIL() << "inverted interval accepted";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.offset(), 1u);
    }
}

TEST(ParseSet, MalformedTextReportsOffset) {
    const std::vector<std::pair<std::string, std::size_t>> cases{
        {"", 0}, {"0,1)", 0}, {"(0 1)", 3}, {"(0,1", 4}, {"(0,1)x", 5}, {"(a,1)", 1}, {"(0,1)|", 6}, {"(1,1)", 1}};
    for (const auto& [text, offset] : cases) {
        try {
            parse_set(text);
            ADD_FAILURE() << "accepted '" << text << "'";
        } catch (const ParseError& e) {
            EXPECT_EQ(e.offset(), offset) << text;
        }
    }
}

TEST(ParseSet, FormatRoundTrip) {
    RandomSetFamily family(17, 8);
    for (int i = 0; i < 200; ++i) {
        const auto e = family.next();
        EXPECT_EQ(parse_set(format_set(e)).set, e);
    }
    EXPECT_EQ(format_set(GaussianSet{{-kInf, 0.5}}), "(-inf,0.5)");
}

TEST(Config, GridsAndNames) {
    const auto g = parse_grid("0.25:0.75:0.25");
    ASSERT_EQ(g.size(), 3u);
    EXPECT_DOUBLE_EQ(g[2], 0.75);
    EXPECT_EQ(parse_grid("-2:2:0.5").size(), 9u);
    EXPECT_THROW(parse_grid("1:2"), UsageError);
    EXPECT_THROW(parse_grid("2:1:0.5"), UsageError);
    EXPECT_THROW(parse_grid("0:1:0"), UsageError);
    EXPECT_THROW(parse_grid("0:x:1"), UsageError);
    EXPECT_EQ(parse_convention("remark"), Convention::remark);
    EXPECT_THROW(parse_convention("other"), UsageError);
    EXPECT_EQ(parse_format("json"), Format::json);
    EXPECT_EQ(parse_suites("all").size(), 4u);
    EXPECT_THROW(parse_suites("lemma"), UsageError);
}

TEST(Config, FileLoadingAndValidation) {
    const auto path = temp_path("config.json");
    {
        std::ofstream os(path);
        os << R"js({"s_grid": "0.2:0.4:0.1", "K": 500, "convention": "remark", "c": 2.5, "seed": 9, "sets": ["(0,1)"]})js";
    }
    const auto cfg = load_config(path.string());
    EXPECT_EQ(cfg.s_grid.size(), 3u);
    EXPECT_EQ(cfg.K, 500u);
    EXPECT_EQ(cfg.convention, Convention::remark);
    EXPECT_EQ(cfg.c, 2.5);
    EXPECT_EQ(cfg.seed, 9u);
    {
        std::ofstream os(path);
        os << R"js({"bogus": 1})js";
    }
    EXPECT_THROW(load_config(path.string()), UsageError);
    std::filesystem::remove(path);
    EXPECT_THROW(load_config(path.string()), UsageError);

    RunConfig bad;
    bad.s_grid = {1.0};
    EXPECT_THROW(bad.validate(), UsageError);
    bad.s_grid = {0.5};
    bad.c = 0.0;
    EXPECT_THROW(bad.validate(), UsageError);
}

TEST(Table, CsvQuotingAndJson) {
    Table t;
    t.columns = {"a", "b", "c", "d"};
    t.add({std::string("x,y"), 0.1, static_cast<std::int64_t>(3), true});
    t.add({std::string("q\"r"), kInf, Cell{}, false});
    std::ostringstream csv;
    write_table(csv, t, Format::csv, "remark");
    const auto rows = lines(csv.str());
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[0], "# frac-gauss-iso v1, convention=remark");
    EXPECT_EQ(rows[1], "a,b,c,d");
    EXPECT_EQ(split_csv(rows[2])[0], "x,y");
    EXPECT_EQ(split_csv(rows[2])[1], "0.10000000000000001");
    EXPECT_EQ(split_csv(rows[3])[0], "q\"r");

    std::ostringstream js;
    write_table(js, t, Format::json, "remark");
    const auto parsed = nlohmann::json::parse(js.str());
    ASSERT_TRUE(parsed.is_array());
    ASSERT_EQ(parsed.size(), 2u);
    EXPECT_EQ(parsed[0]["a"], "x,y");
    EXPECT_EQ(parsed[0]["b"].get<double>(), 0.1);
    EXPECT_EQ(parsed[0]["c"], 3);
    EXPECT_EQ(parsed[0]["d"], true);
    EXPECT_EQ(parsed[1]["b"], "inf");
    EXPECT_TRUE(parsed[1]["c"].is_null());
}

TEST(Commands, PerimeterRowMatchesLibrary) {
    RunConfig cfg;
    cfg.sets = {"(-inf,0)", "(0,1)"};
    cfg.s_grid = {0.3, 0.6};
    cfg.K = 2000;
    const auto res = cmd_perimeter(cfg);
    ASSERT_EQ(res.table.rows.size(), 4u);
    EXPECT_EQ(res.exit_code, kExitOk);
    const double want = perimeter_spectral(GaussianSet{{0.0, 1.0}}, FractionalOrder(0.6), 2000).value;
    EXPECT_EQ(std::get<double>(res.table.rows[3][4]), want);
}

TEST(Cli, PerimeterExample) {
    const auto r = run_cli("perimeter --set \"(-inf,0)\" --s 0.5 --K 10000");
    EXPECT_EQ(r.code, 0);
    const auto rows = lines(r.out);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0], "# frac-gauss-iso v1, convention=with-constant");
    EXPECT_EQ(rows[1], "set,s,K,convention,value,tail_bound");
    EXPECT_GT(std::stod(column(rows, 2, "value")), 0.0);
    EXPECT_EQ(column(rows, 2, "K"), "10000");
}

TEST(Cli, DeficitOfHalflineIsZero) {
    const auto r = run_cli("deficit --set \"(-inf,0)\"");
    EXPECT_EQ(r.code, 0);
    const auto rows = lines(r.out);
    ASSERT_GE(rows.size(), 3u);
    EXPECT_NEAR(std::stod(column(rows, 2, "deficit")), 0.0, 1e-12);
    EXPECT_EQ(column(rows, 2, "satisfied"), "true");
    EXPECT_NE(column(rows, 2, "note").find("assumed"), std::string::npos);
}

TEST(Cli, JsonAndOutFile) {
    const auto path = temp_path("asym.json");
    const auto r = run_cli("asymmetry --set \"(-0.5,0.5)\" --format json --out " + path.string());
    EXPECT_EQ(r.code, 0);
    EXPECT_TRUE(r.out.empty());
    std::ifstream in(path);
    const auto j = nlohmann::json::parse(in);
    ASSERT_EQ(j.size(), 1u);
    EXPECT_NEAR(j[0]["asym"].get<double>(), asymmetry(GaussianSet{{-0.5, 0.5}}).value, 1e-15);
    std::filesystem::remove(path);
}

TEST(Cli, ConfigFileWithFlagOverride) {
    const auto path = temp_path("cfg.json");
    {
        std::ofstream os(path);
        os << R"js({"sets": ["(0,1)"], "s_grid": [0.25, 0.75], "K": 300})js";
    }
    const auto r = run_cli("perimeter --config " + path.string() + " --K 400");
    EXPECT_EQ(r.code, 0);
    const auto rows = lines(r.out);
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(column(rows, 2, "K"), "400");
    EXPECT_EQ(column(rows, 3, "s"), "0.75");
    std::filesystem::remove(path);
}

TEST(Cli, OtherCommandsRun) {
    auto ext = run_cli("extension-eval --set \"(-inf,0)\" --x 0 --z 0.1,1 --K 2000");
    EXPECT_EQ(ext.code, 0);
    auto rows = lines(ext.out);
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_NEAR(std::stod(column(rows, 2, "U")), 0.5, 1e-10);

    auto sweep = run_cli("sweep --r-grid -1:1:1 --s 0.5 --K 1000");
    EXPECT_EQ(sweep.code, 0);
    EXPECT_EQ(lines(sweep.out).size(), 5u);

    auto asym = run_cli("asymptotic --s 0.9 --K 2000");
    EXPECT_EQ(asym.code, 0);
    rows = lines(asym.out);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(column(rows, 2, "convention"), "remark");
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run_cli("perimeter --set \"(2,1)\"").code, 2);
    EXPECT_EQ(run_cli("perimeter --set \"(0,1\"").code, 2);
    EXPECT_EQ(run_cli("perimeter --set \"(0,1)\" --s 1.5").code, 2);
    EXPECT_EQ(run_cli("perimeter").code, 2);
    EXPECT_EQ(run_cli("perimeter --set \"(0,1)\" --convention nope").code, 2);
    EXPECT_EQ(run_cli("verify --suite nope").code, 2);
    EXPECT_EQ(run_cli("nosuchcommand").code, 2);
    EXPECT_EQ(run_cli("asymmetry --set \"(-inf,inf)\"").code, 2);
    // a tiny c inflates the main-branch bound past the deficit
    EXPECT_EQ(run_cli("deficit --set \"(-inf,-0.05)|(0.1,0.4)\" --c 1e-12 --c-max 1e-12").code, 1);
}

TEST(Cli, VerifyIsByteIdenticalAcrossRuns) {
    const auto a = run_cli("verify --suite main --n 100 --seed 7");
    const auto b = run_cli("verify --suite main --n 100 --seed 7");
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_FALSE(a.out.empty());
    const auto rows = lines(a.out);
    EXPECT_EQ(column(rows, 2, "record"), "summary");
}

TEST(Cli, VerifyOutputIndependentOfThreads) {
    const auto a = run_cli("verify --suite transfer --n 100 --seed 4");
    const auto b = run_cli("verify --suite transfer --n 100 --seed 4");
    setenv("FGI_THREADS", "3", 1);
    const auto c = run_cli("verify --suite transfer --n 100 --seed 4");
    unsetenv("FGI_THREADS");
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.out, c.out);
}
