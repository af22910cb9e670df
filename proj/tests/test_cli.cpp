#include "lorentz/cli.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

using namespace lorentz;

namespace {

struct Outcome
{
    int         status;
    std::string out;
    std::string err;
};

Outcome run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int          status = cli::run(args, out, err);
    return {status, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s)
{
    std::vector<std::string> v;
    std::istringstream       in(s);
    for (std::string l; std::getline(in, l);) v.push_back(l);
    return v;
}

std::vector<std::string> fields(const std::string& line)
{
    std::vector<std::string> v;
    std::istringstream       in(line);
    for (std::string f; std::getline(in, f, ',');) v.push_back(f);
    return v;
}

// Data rows after the header, split into fields.
std::vector<std::vector<std::string>> data_rows(const std::string& csv)
{
    std::vector<std::vector<std::string>> rows;
    bool                                  header = false;
    for (const auto& l : lines(csv)) {
        if (l.rfind('#', 0) == 0) continue;
        if (!header) {
            header = true;
            continue;
        }
        rows.push_back(fields(l));
    }
    return rows;
}

void expect_error(const Outcome& o, int status, const std::string& kind)
{
    EXPECT_EQ(o.status, status);
    EXPECT_TRUE(o.out.empty());
    const auto j = nlohmann::json::parse(o.err);
    EXPECT_EQ(j.at("error"), kind);
    EXPECT_TRUE(j.contains("command"));
    EXPECT_FALSE(j.at("message").get<std::string>().empty());
}

} // namespace

TEST(Cli, EnvelopeTableIsCaseThreeOneThroughout)
{
    const Outcome o = run({"envelope", "p=2", "u=1", "q=2", "v=2", "n=1024", "kmax=4096"});
    ASSERT_EQ(o.status, 0);
    const auto ls = lines(o.out);
    ASSERT_GE(ls.size(), 2u);
    EXPECT_EQ(ls[0], "# schema=1");
    EXPECT_NE(std::find(ls.begin(), ls.end(), "k,value,case,regime"), ls.end());
    const auto rows = data_rows(o.out);
    ASSERT_EQ(rows.size(), 4096u);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        ASSERT_EQ(rows[i].size(), 4u);
        EXPECT_EQ(rows[i][0], std::to_string(i + 1));
        EXPECT_EQ(rows[i][2], "III.1");
        EXPECT_NEAR(std::stod(rows[i][1]), std::exp2(-double(i + 1) / 1024.0), 1e-15);
    }
    EXPECT_EQ(rows[7][3], "mid-k");
    EXPECT_EQ(rows[1100][3], "large-k");
}

TEST(Cli, OpnormExactExample)
{
    const Outcome o = run({"opnorm", "p=2", "u=2", "q=2", "v=1", "n=3", "method=exact"});
    ASSERT_EQ(o.status, 0);
    const auto rows = data_rows(o.out);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0][0], "exact");
    EXPECT_NEAR(std::stod(rows[0][1]), std::sqrt(11.0 / 6.0), 1e-15);
    EXPECT_EQ(rows[0][2], "III.2");
}

TEST(Cli, NormSigmaAndKfunc)
{
    auto rows = data_rows(run({"norm", "p=inf", "u=inf", "x=3,-7,1"}).out);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0].back(), "7");
    rows = data_rows(run({"sigma", "q=inf", "v=inf", "x=3,2,1", "s=1"}).out);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0][1], "2");
    rows = data_rows(run({"kfunc", "p0=1", "u0=1", "p1=inf", "u1=inf", "x=1,1", "t=1.5"}).out);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0][1], "1.5");
}

TEST(Cli, JsonLinesParse)
{
    const Outcome o = run({"envelope", "p=1", "u=1", "q=inf", "v=2", "n=16", "kmax=40", "format=json"});
    ASSERT_EQ(o.status, 0);
    const auto ls = lines(o.out);
    ASSERT_EQ(ls.size(), 41u);
    const auto head = nlohmann::json::parse(ls[0]);
    EXPECT_EQ(head.at("schema"), 1);
    EXPECT_EQ(head.at("command"), "envelope");
    for (std::size_t i = 1; i < ls.size(); ++i) {
        const auto row = nlohmann::json::parse(ls[i]);
        EXPECT_EQ(row.at("k"), i);
        EXPECT_EQ(row.at("case"), "II");
        EXPECT_GT(row.at("value").get<double>(), 0.0);
    }
}

TEST(Cli, ByteIdenticalForSameSeed)
{
    const std::vector<std::string> vol{"volume", "p=2", "u=1", "n=4", "samples=200000", "seed=9"};
    EXPECT_EQ(run(vol).out, run(vol).out);
    const std::vector<std::string> bounds{"entropy-bounds", "p=1", "u=1", "q=inf", "v=inf", "n=2", "kmax=4", "seed=3"};
    const Outcome a = run(bounds), b = run(bounds);
    EXPECT_EQ(a.status, 0);
    EXPECT_EQ(a.out, b.out);
    const std::vector<std::string> other{"volume", "p=2", "u=1", "n=4", "samples=200000", "seed=10"};
    EXPECT_NE(run(vol).out, run(other).out);
}

TEST(Cli, OutputFileMatchesStdout)
{
    const std::string path = ::testing::TempDir() + "lorentz_cli_out.csv";
    const Outcome     o    = run({"opnorm", "p=1", "u=2", "q=2", "v=1", "n=8", "output=" + path});
    ASSERT_EQ(o.status, 0);
    EXPECT_TRUE(o.out.empty());
    std::ifstream     in(path, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    EXPECT_EQ(buf.str(), run({"opnorm", "p=1", "u=2", "q=2", "v=1", "n=8"}).out);
    std::remove(path.c_str());
}

TEST(Cli, VerifySuiteExitStatus)
{
    const Outcome o = run({"verify", "suite=sigma", "seed=42"});
    EXPECT_EQ(o.status, 0);
    const auto rows = data_rows(o.out);
    ASSERT_FALSE(rows.empty());
    EXPECT_EQ(rows[0][0], "2");
    EXPECT_EQ(rows[0][1], "status");
    EXPECT_EQ(rows[0][3], "pass");
}

TEST(Cli, InvalidArgumentsGiveErrorRecords)
{
    expect_error(run({"bogus"}), 2, "invalid_argument");
    expect_error(run({}), 2, "invalid_argument");
    expect_error(run({"norm", "p=2", "u=1", "x=1", "foo=1"}), 2, "invalid_argument");
    expect_error(run({"norm", "p=0", "u=1", "x=1"}), 2, "invalid_argument");
    expect_error(run({"norm", "p=2", "p=3", "u=1", "x=1"}), 2, "invalid_argument");
    expect_error(run({"norm", "p=2", "u=1", "x=1,abc"}), 2, "invalid_argument");
    expect_error(run({"norm", "p=2", "u=1", "x=1", "format=xml"}), 2, "invalid_argument");
    expect_error(run({"envelope", "p=2", "u=1", "q=2", "v=2", "n=0"}), 2, "invalid_argument");
    expect_error(run({"sigma", "q=2", "v=2", "x=1,2", "s=3"}), 2, "invalid_argument");
    expect_error(run({"norm", "p=2", "u=1", "x=1", "output=/nonexistent/dir/f.csv"}), 3, "computation_failed");
}

TEST(Cli, HelpAndInfToken)
{
    const Outcome h = run({"help"});
    EXPECT_EQ(h.status, 0);
    EXPECT_NE(h.out.find("usage:"), std::string::npos);
    EXPECT_EQ(run({"norm", "p=inf", "u=1", "x=1,1,1"}).status, 0);
}

TEST(Cli, NumberFormatting)
{
    EXPECT_EQ(cli::format_number(0.1), "0.10000000000000001");
    EXPECT_EQ(cli::format_number(2.0), "2");
    EXPECT_EQ(cli::format_number(-1.5e-300), "-1.5000000000000001e-300");
    EXPECT_EQ(cli::format_number(std::numeric_limits<double>::infinity()), "inf");
    for (double v : {std::sqrt(2.0), 1.0 / 3.0, 6.02214076e23, 5e-324}) {
        EXPECT_EQ(std::strtod(cli::format_number(v).c_str(), nullptr), v);
    }
}
