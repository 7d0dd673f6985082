#include <gtest/gtest.h>
#include <json.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracles.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string fixture(const std::string& name) { return std::string(SIGNREL_FIXTURES) + "/" + name; }

Run cli(const std::string& args) {
    static int counter = 0;
    auto dir = fs::temp_directory_path() / ("signrel_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    auto out = dir / ("out" + std::to_string(counter) + ".txt");
    auto err = dir / ("err" + std::to_string(counter) + ".txt");
    ++counter;
    std::string cmd = std::string(SIGNREL_CLI) + " " + args + " >" + out.string() + " 2>" + err.string();
    int status = std::system(cmd.c_str());
    Run r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) out.push_back(line);
    return out;
}

fs::path write_temp(const std::string& name, const std::string& body) {
    auto p = fs::temp_directory_path() / ("signrel_" + std::to_string(::getpid()) + "_" + name);
    std::ofstream(p) << body;
    return p;
}

}  // namespace

TEST(Cli, StatsCounts) {
    auto r = cli("stats --data " + fixture("tiny_weighted.csv"));
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["nodes"], 4);
    EXPECT_EQ(j["pos_edges"], 4);
    EXPECT_EQ(j["neg_edges"], 2);
    EXPECT_EQ(j["reciprocity"]["pos_rate"], 0.5);
    EXPECT_EQ(j["triads"]["ppn"], 1);
    EXPECT_EQ(j["triads"]["pnn"], 1);
}

TEST(Cli, StatsOnEmptyFile) {
    auto r = cli("stats --data " + fixture("empty.csv"));
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["nodes"], 0);
    EXPECT_EQ(j["pos_edges"], 0);
    EXPECT_EQ(j["neg_edges"], 0);
}

TEST(Cli, MalformedRowExitsOneWithLine) {
    auto r = cli("stats --data " + fixture("malformed.csv"));
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("line 2"), std::string::npos);
}

TEST(Cli, MissingFileIsDataError) {
    EXPECT_EQ(cli("stats --data /nonexistent/edges.csv").code, 1);
}

TEST(Cli, DegreeHistogramCsv) {
    auto r = cli("stats --data " + fixture("tiny_weighted.csv") + " --degree out- --out-format csv");
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(lines(r.out), (std::vector<std::string>{"degree,count", "0,2", "1,2"}));
}

TEST(Cli, ScoreSinglePair) {
    auto pairs = write_temp("single_pair.csv", "a,d\n");
    auto r = cli("score --data " + fixture("tiny_weighted.csv") + " --pairs " + pairs.string() +
                 " --measure cn --strategy remove_neg --out-format csv");
    ASSERT_EQ(r.code, 0) << r.err;
    auto rows = lines(r.out);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0], "src,dst,score");
    // Positive support: a-b, c-d, b-d. a and d share b.
    EXPECT_EQ(rows[1], "a,d,1");
}

TEST(Cli, ScoresPermuteWithPairs) {
    auto forward = write_temp("fwd.csv", "a,c\nb,d\nc,a\n");
    auto backward = write_temp("bwd.csv", "c,a\nb,d\na,c\n");
    std::string base = "score --data " + fixture("tiny_weighted.csv") + " --measure katz --out-format csv --pairs ";
    auto f = lines(cli(base + forward.string()).out);
    auto b = lines(cli(base + backward.string()).out);
    ASSERT_EQ(f.size(), 4u);
    ASSERT_EQ(b.size(), 4u);
    EXPECT_EQ(f[1], b[3]);
    EXPECT_EQ(f[2], b[2]);
    EXPECT_EQ(f[3], b[1]);
}

TEST(Cli, RandomWalkMatchesDenseOracle) {
    auto pairs = write_temp("neg_pair.csv", "a,c\nd,a\n");
    auto r = cli("score --data " + fixture("tiny_weighted.csv") + " --pairs " + pairs.string() +
                 " --measure rwr --c 0.5 --tol 1e-13 --max-iter 500 --out-format csv");
    ASSERT_EQ(r.code, 0) << r.err;
    // Node ids follow first appearance: a=0, b=1, c=2, d=3.
    oracle::EdgeList el{4, true,
                        {{0, 1, 1, {}}, {1, 0, 1, {}}, {0, 2, -1, {}}, {2, 3, 1, {}},
                         {3, 0, -1, {}}, {1, 3, 1, {}}}};
    auto a = oracle::dense_adjacency(el);
    auto rows = lines(r.out);
    ASSERT_EQ(rows.size(), 3u);
    double ac = std::stod(rows[1].substr(rows[1].rfind(',') + 1));
    double da = std::stod(rows[2].substr(rows[2].rfind(',') + 1));
    EXPECT_NEAR(ac, oracle::rwr_row(a, 0, 0.5)(2), 1e-10);
    EXPECT_NEAR(da, oracle::rwr_row(a, 3, 0.5)(0), 1e-10);
    EXPECT_LT(ac, 0.0);
    EXPECT_LT(da, 0.0);
}

TEST(Cli, UnknownLabelExitsTwo) {
    auto pairs = write_temp("unknown.csv", "a,zz\n");
    auto r = cli("score --data " + fixture("tiny_weighted.csv") + " --pairs " + pairs.string());
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("zz"), std::string::npos);
}

TEST(Cli, TieTaskWithoutRatingsExitsTwo) {
    auto r = cli("eval tie --data " + fixture("signed_ws.txt") + " --format whitespace_signed");
    EXPECT_EQ(r.code, 2);
}

TEST(Cli, BadFlagValuesExitTwo) {
    EXPECT_EQ(cli("eval link --data " + fixture("tiny_weighted.csv") + " --c 1.5").code, 2);
    EXPECT_EQ(cli("eval link --data " + fixture("tiny_weighted.csv") + " --measure nope").code, 2);
    EXPECT_EQ(cli("stats --data " + fixture("tiny_weighted.csv") + " --format xml").code, 2);
    EXPECT_EQ(cli("--no-such-flag").code, 2);
}

TEST(Cli, EvalIsDeterministic) {
    std::string args = "eval tie --data " + fixture("tiny_weighted.csv") +
                       " --measure all --strategy all --out-format csv --workers 2";
    auto first = cli(args);
    auto second = cli(args);
    ASSERT_EQ(first.code, 0) << first.err;
    EXPECT_EQ(first.out, second.out);
    EXPECT_EQ(lines(first.out).size(), 19u);
}

TEST(Cli, EnvironmentOverrides) {
    auto out = fs::temp_directory_path() / ("signrel_env_" + std::to_string(::getpid()) + ".csv");
    std::string cmd = "SR_MEASURE=katz SR_OUT_FORMAT=csv SR_DATA=" + fixture("tiny_weighted.csv") +
                      " " + SIGNREL_CLI + " eval tie >" + out.string() + " 2>/dev/null";
    int status = std::system(cmd.c_str());
    ASSERT_TRUE(WIFEXITED(status));
    ASSERT_EQ(WEXITSTATUS(status), 0);
    auto rows = lines(slurp(out));
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[1].substr(0, 3), "SK,");
}
