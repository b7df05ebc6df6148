#include "choquard/cli.hpp"
#include "choquard/config.hpp"
#include "choquard/field_io.hpp"
#include "choquard/solver.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace choquard;
namespace fs = std::filesystem;

namespace {

class CliTest : public ::testing::Test {
protected:
    void SetUp() override
    {
        dir_ = fs::temp_directory_path() /
               ("choquard_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    fs::path write_config(const std::string& text, const std::string& name = "run.cfg")
    {
        std::ofstream(dir_ / name) << text;
        return dir_ / name;
    }

    int run(std::vector<std::string> args)
    {
        out_.str("");
        err_.str("");
        return cli::run(args, out_, err_);
    }

    fs::path dir_;
    std::ostringstream out_;
    std::ostringstream err_;
};

const char* kPlanar = "N=2\nalpha=1\np=2.5\nM=64\nL=20\n";

nlohmann::json read_json(const fs::path& p)
{
    std::ifstream is(p);
    return nlohmann::json::parse(is);
}

int count_lines(const fs::path& p)
{
    std::ifstream is(p);
    std::string line;
    int n = 0;
    while (std::getline(is, line))
        ++n;
    return n;
}

} // namespace

TEST(Config, ParsesProblemGridAndSolverKeys)
{
    std::istringstream in("# comment\nN=3\nalpha=2\np=2\nM=48\nL=24\nmax_iters=100\nseed=7\n\nformats=csv\n");
    const auto cfg = parse_config(in);
    EXPECT_EQ(cfg.problem().dim, 3);
    EXPECT_EQ(cfg.grid().points, 48);
    EXPECT_EQ(cfg.grid().length, 24.0);
    EXPECT_EQ(cfg.solver.max_iters, 100);
    EXPECT_EQ(cfg.solver.seed, 7u);
    EXPECT_EQ(cfg.formats, std::vector<std::string>{"csv"});
}

TEST(Config, UnknownAndDuplicateKeysRejected)
{
    std::istringstream unknown("N=3\nalpah=2\n");
    EXPECT_THROW(parse_config(unknown), ConfigError);
    std::istringstream dup("N=3\nN=2\n");
    EXPECT_THROW(parse_config(dup), ConfigError);
    std::istringstream junk("N=3\nnot a pair\n");
    EXPECT_THROW(parse_config(junk), ConfigError);
    std::istringstream badnum("N=3\nalpha=two\n");
    EXPECT_THROW(parse_config(badnum), ConfigError);
}

TEST(Config, DomainValidatedUpFront)
{
    std::istringstream odd("N=3\nalpha=2\np=2\nM=33\n");
    EXPECT_THROW(parse_config(odd), ParameterError);
    std::istringstream bad_alpha("N=3\nalpha=0\np=2\n");
    EXPECT_THROW(parse_config(bad_alpha), ParameterError);
    std::istringstream both("N=3\nalpha=2\np=2\nterms=1:2\n");
    EXPECT_THROW(parse_config(both), ConfigError);
}

TEST(Config, TermAndPointLists)
{
    const auto terms = parse_terms("1:2, 0.5:3");
    ASSERT_EQ(terms.size(), 2u);
    EXPECT_EQ(terms[1].coefficient, 0.5);
    EXPECT_EQ(terms[1].exponent, 3.0);
    const auto pts = parse_points("3:1:2;3:1:4.5");
    ASSERT_EQ(pts.size(), 2u);
    EXPECT_EQ(pts[1].p, 4.5);
    EXPECT_THROW(parse_terms("1-2"), ConfigError);
    EXPECT_THROW(parse_points("3:1"), ConfigError);
}

TEST(FieldIo, RoundTripIsBitExact)
{
    const auto g = make_grid(3, 8, 5.0);
    const auto spec = make_problem(3, 1.5, Nonlinearity::power(7.0 / 3.0));
    auto u = sample(g, [](std::span<const double> x) { return std::exp(-x[0] * x[0]) * std::sin(x[1] + 0.1 * x[2]); });
    std::stringstream buf;
    write_field(buf, u, spec);
    EXPECT_EQ(buf.str().rfind(kFieldMagic, 0), 0u);
    const auto back = read_field(buf);
    EXPECT_EQ(back.field.grid, g);
    EXPECT_EQ(back.field.values, u.values);
    EXPECT_EQ(back.spec.alpha, 1.5);
    EXPECT_EQ(back.spec.nonlinearity.exponent(), 7.0 / 3.0);
    EXPECT_EQ(energy(back.field, back.spec), energy(u, spec));
}

TEST(FieldIo, MultiTermHeaderRoundTrip)
{
    const auto g = make_grid(2, 8, 4.0);
    const auto spec = make_problem(2, 1.0, Nonlinearity({{2.0, 2.0}, {0.5, 3.0}}));
    std::stringstream buf;
    write_field(buf, Field(g), spec);
    const auto back = read_field(buf);
    ASSERT_EQ(back.spec.nonlinearity.terms().size(), 2u);
    EXPECT_EQ(back.spec.nonlinearity.terms()[0].coefficient, 2.0);
}

TEST(FieldIo, RejectsBadMagicAndTruncation)
{
    std::stringstream bad("CHOQF0\nversion=1\n");
    EXPECT_THROW(read_field(bad), ParameterError);
    const auto g = make_grid(2, 8, 4.0);
    std::stringstream buf;
    write_field(buf, Field(g), make_problem(2, 1.0, Nonlinearity::power(2.5)));
    std::string s = buf.str();
    s.resize(s.size() - 5);
    std::stringstream cut(s);
    EXPECT_THROW(read_field(cut), ParameterError);
}

TEST_F(CliTest, CheckReportsHypotheses)
{
    EXPECT_EQ(run({"check", "--config", write_config("N=3\nalpha=2\np=2\n").string()}), cli::ok);
    EXPECT_NE(out_.str().find("interval=(1.666666666666666"), std::string::npos) << out_.str();
    EXPECT_NE(out_.str().find(", 5)"), std::string::npos) << out_.str();
    EXPECT_EQ(run({"check", "--config", write_config("N=2\nalpha=1\np=1.4\n").string()}), cli::degenerate);
    EXPECT_EQ(run({"check", "--config", write_config("N=3\nalpha=0.0\np=2\n").string()}), cli::config_error);
}

TEST_F(CliTest, MalformedConfigExitsTwo)
{
    EXPECT_EQ(run({"solve", "--config", write_config("N=3\nbogus=1\n").string()}), cli::config_error);
    EXPECT_EQ(run({"solve", "--config", (dir_ / "absent.cfg").string()}), cli::config_error);
    EXPECT_EQ(run({"solve"}), cli::config_error);
    EXPECT_EQ(run({"frobnicate", "--config", "x"}), cli::config_error);
}

TEST_F(CliTest, SolveThenPathRoundTrip)
{
    const auto cfg = write_config(kPlanar);
    const auto out = (dir_ / "out").string();
    ASSERT_EQ(run({"solve", "--config", cfg.string(), "--out", out}), cli::certificate_failure)
        << "M=64 leaves a Pohozaev defect above the certificate bound";
    const auto summary = read_json(dir_ / "out" / "summary.json");
    EXPECT_EQ(summary["status"], "certificate_failed");
    EXPECT_LE(summary["residual_rel"].get<double>(), 1e-8);

    ASSERT_EQ(run({"path", "--config", cfg.string(), "--out", out, "--solution", (dir_ / "out" / "solution.choqf").string()}),
              cli::ok);
    EXPECT_EQ(count_lines(dir_ / "out" / "path.csv"), 98);

    const auto stored = read_field(dir_ / "out" / "solution.choqf");
    EXPECT_NEAR(energy(stored.field, stored.spec), summary["energy"].get<double>(),
                1e-12 * summary["energy"].get<double>());
}

TEST_F(CliTest, PathWritesSplicedProfileInTwoDimensions)
{
    const auto cfg = write_config(std::string(kPlanar) + "t0=0.1\n");
    const auto out = (dir_ / "out").string();
    run({"solve", "--config", cfg.string(), "--out", out});
    ASSERT_EQ(run({"path", "--config", cfg.string(), "--out", out, "--solution", out + "/solution.choqf"}), cli::ok);
    EXPECT_TRUE(fs::exists(dir_ / "out" / "path_spliced.csv"));
}

TEST_F(CliTest, PathErrors)
{
    const auto cfg = write_config(kPlanar);
    EXPECT_EQ(run({"path", "--config", cfg.string(), "--solution", (dir_ / "missing.choqf").string()}),
              cli::config_error);

    const auto spec = make_problem(2, 1.0, Nonlinearity::power(2.5));
    const auto other = sample(make_grid(2, 32, 20.0), [](std::span<const double> x) { return std::exp(-x[0] * x[0] - x[1] * x[1]); });
    write_field(dir_ / "other.choqf", other, spec);
    EXPECT_EQ(run({"path", "--config", cfg.string(), "--solution", (dir_ / "other.choqf").string()}), cli::config_error);
}

TEST_F(CliTest, SolveIsDeterministic)
{
    const auto cfg = write_config(kPlanar);
    run({"solve", "--config", cfg.string(), "--out", (dir_ / "a").string(), "--seed", "3"});
    run({"solve", "--config", cfg.string(), "--out", (dir_ / "b").string(), "--seed", "3"});
    auto a = read_json(dir_ / "a" / "summary.json");
    auto b = read_json(dir_ / "b" / "summary.json");
    a.erase("wall_time_s");
    b.erase("wall_time_s");
    EXPECT_EQ(a, b);
    EXPECT_EQ(a["seed"], 3);
}

TEST_F(CliTest, SweepExitCodes)
{
    const auto empty = write_config("M2=32\nL2=20\n");
    EXPECT_EQ(run({"sweep", "--config", empty.string()}), cli::config_error);

    const auto cfg = write_config("points=2:1:2.5;2:1:1.2\nM2=32\nL2=20\n");
    EXPECT_EQ(run({"sweep", "--config", cfg.string(), "--out", dir_.string()}), cli::ok);
    EXPECT_EQ(count_lines(dir_ / "sweep.csv"), 3);
    EXPECT_EQ(count_lines(dir_ / "sweep.jsonl"), 2);
}
