#include "molcom/cli.hpp"
#include "molcom/stable.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace molcom;
using namespace molcom::cli;

namespace {

RunConfig
parse(std::vector<std::string> args)
{
  args.insert(args.begin(), "molcom");
  std::vector<const char*> argv;
  for (const auto& a : args)
    argv.push_back(a.c_str());
  return parse_args(static_cast<int>(argv.size()), argv.data());
}

struct Outcome
{
  int code;
  std::string out;
  std::string err;
};

Outcome
invoke(std::vector<std::string> args)
{
  args.insert(args.begin(), "molcom");
  std::vector<const char*> argv;
  for (const auto& a : args)
    argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return { code, out.str(), err.str() };
}

double
number(const Cell& c)
{
  return std::get<double>(c);
}

// Row of a table whose first column equals x.
const std::vector<Cell>&
row_at(const Table& t, double x)
{
  for (const auto& r : t.rows)
    if (number(r[0]) == x)
      return r;
  throw std::runtime_error("no row at " + std::to_string(x));
}

std::filesystem::path
scratch_dir(const std::string& name)
{
  const auto dir = std::filesystem::temp_directory_path() / ("molcom_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string
slurp(const std::filesystem::path& p)
{
  std::ifstream in(p, std::ios::binary);
  return { std::istreambuf_iterator<char>(in), {} };
}

} // namespace

TEST(Grid, LinearAndLogSpacing)
{
  const auto lin = Grid{ -10, 10, 401 }.abscissae(false);
  ASSERT_EQ(lin.size(), 401u);
  EXPECT_EQ(lin.front(), -10.0);
  EXPECT_EQ(lin[200], 0.0);
  EXPECT_EQ(lin.back(), 10.0);
  EXPECT_EQ(lin[199], -0.05);

  const auto log = Grid{ 1, 1e4, 81 }.abscissae(true);
  EXPECT_EQ(log.front(), 1.0);
  EXPECT_EQ(log[40], 100.0);
  EXPECT_EQ(log.back(), 1e4);
  for (std::size_t i = 1; i < log.size(); ++i)
    EXPECT_GT(log[i], log[i - 1]);
}

TEST(ParseArgs, Defaults)
{
  const RunConfig cfg = parse({});
  EXPECT_EQ(cfg.command, Command::figures);
  EXPECT_EQ(cfg.seed, sim::default_seed);
  EXPECT_EQ(cfg.format, Format::csv);
  EXPECT_FALSE(cfg.channel);
  EXPECT_EQ(cfg.betas(), (std::vector<double>{ 0, 0.5, 1 }));
  EXPECT_EQ(parse({ "--command", "pdf" }).betas(), std::vector<double>{ 0 });
}

TEST(ParseArgs, TailDefaultsToLogGrid)
{
  const RunConfig cfg = parse({ "--command", "tail" });
  EXPECT_EQ(cfg.grid.min, 1.0);
  EXPECT_EQ(cfg.grid.max, 1e4);
  EXPECT_THROW(parse({ "--command", "tail", "--grid-min", "-1" }), UsageError);
}

TEST(ParseArgs, Flags)
{
  const RunConfig cfg = parse({ "--command", "cdf", "--beta", "-0.5", "--beta", "1",
                                "--channel-kind", "c", "--d", "2", "--Da", "3", "--Db",
                                "4", "--seed", "7", "--format", "json", "--ks-threshold",
                                "0.01" });
  EXPECT_EQ(cfg.beta_list, (std::vector<double>{ -0.5, 1 }));
  ASSERT_TRUE(cfg.channel);
  EXPECT_EQ(cfg.channel->kind, channels::ChannelKind::C);
  EXPECT_EQ(*cfg.channel->Db, 4.0);
  EXPECT_FALSE(cfg.channel->D);
  EXPECT_EQ(cfg.seed, 7u);
  EXPECT_EQ(cfg.format, Format::json);
  EXPECT_EQ(cfg.ks_threshold, 0.01);
}

TEST(ParseArgs, Errors)
{
  EXPECT_THROW(parse({ "--command", "plot" }), UsageError);
  EXPECT_THROW(parse({ "--bogus" }), UsageError);
  EXPECT_THROW(parse({ "--grid-min", "5", "--grid-max", "1" }), UsageError);
  EXPECT_THROW(parse({ "--grid-points", "1" }), UsageError);
  EXPECT_THROW(parse({ "--beta", "1.5" }), UsageError);
  EXPECT_THROW(parse({ "--channel-kind", "D", "--d", "1" }), UsageError);
  EXPECT_THROW(parse({ "--channel-kind", "A" }), UsageError);
  EXPECT_THROW(parse({ "--channel-kind", "A", "--d", "1" }), UsageError);
  EXPECT_THROW(parse({ "--D", "1" }), UsageError);
  EXPECT_THROW(parse({ "--command", "sample" }), UsageError);
  EXPECT_THROW(parse({ "--n", "0" }), UsageError);
  EXPECT_THROW(parse({ "--help" }), HelpRequested);
}

TEST(ParseArgs, ConfigFileWithFlagOverride)
{
  const auto dir = scratch_dir("config");
  const auto path = dir / "run.ini";
  std::ofstream(path) << "# channel B\ncommand = pdf\nchannel-kind = B\nd = 1\nD = 2\n"
                         "beta = [0.25, 0.75]\ngrid-points = 11\nseed = 99\n";
  const RunConfig cfg = parse({ "--config", path.string(), "--seed", "5" });
  EXPECT_EQ(cfg.command, Command::pdf);
  ASSERT_TRUE(cfg.channel);
  EXPECT_EQ(*cfg.channel->D, 2.0);
  EXPECT_EQ(cfg.beta_list, (std::vector<double>{ 0.25, 0.75 }));
  EXPECT_EQ(cfg.grid.points, 11u);
  EXPECT_EQ(cfg.seed, 5u);

  std::ofstream(dir / "bad.ini") << "colour = red\n";
  EXPECT_THROW(parse({ "--config", (dir / "bad.ini").string() }), UsageError);
  EXPECT_THROW(parse({ "--config", (dir / "missing.ini").string() }), UsageError);
}

TEST(Output, CsvFormat)
{
  Table t;
  t.columns = { "a", "b", "c" };
  t.rows = { { 0.1, std::int64_t{ 3 }, std::string("x") },
             { 2.0 / 3.0, std::int64_t{ -1 }, std::string("y") } };
  EXPECT_EQ(to_csv(t), "a,b,c\n0.10000000000000001,3,x\n0.66666666666666663,-1,y\n");
  EXPECT_EQ(format_number(1e-300), "1e-300");
  EXPECT_EQ(format_number(1.0 / 3.0e300), "3.333333333333333e-301");
  EXPECT_EQ(format_number(0.0), "0");
  EXPECT_EQ(format_number(100.0), "100");
}

TEST(Output, JsonMirrorsColumns)
{
  Table t;
  t.name = "demo";
  t.columns = { "x", "y" };
  t.rows = { { 1.5, INFINITY } };
  t.metadata = { { "seed", 1 } };
  const auto doc = nlohmann::json::parse(to_json(t));
  EXPECT_EQ(doc["name"], "demo");
  EXPECT_EQ(doc["columns"], nlohmann::json({ "x", "y" }));
  EXPECT_EQ(doc["rows"][0]["x"], 1.5);
  EXPECT_TRUE(doc["rows"][0]["y"].is_null());
  EXPECT_EQ(doc["metadata"]["seed"], 1);
}

TEST(CmdFigures, Examples)
{
  const auto tables = cmd_figures(parse({}));
  ASSERT_EQ(tables.size(), 3u);
  const Table& pdf = tables[0];
  const Table& cdf = tables[1];
  const Table& tail = tables[2];
  EXPECT_EQ(pdf.columns,
            (std::vector<std::string>{ "x", "beta_0", "beta_0.5", "beta_1", "gaussian" }));
  EXPECT_EQ(pdf.rows.size(), 401u);
  EXPECT_NEAR(number(row_at(pdf, 0)[1]), 0.6366198, 5e-8);
  EXPECT_NEAR(number(row_at(pdf, 0)[1]), 2 / std::numbers::pi, 1e-15);
  EXPECT_NEAR(number(row_at(pdf, 0)[4]), 1 / std::sqrt(2 * std::numbers::pi), 1e-15);
  EXPECT_NEAR(number(row_at(cdf, 0)[1]), 0.5, 1e-15);
  EXPECT_EQ(number(row_at(pdf, -3)[3]), 0.0);

  EXPECT_EQ(tail.columns.size(), 9u);
  EXPECT_EQ(tail.columns[6], "approx_beta_1");
  EXPECT_NEAR(number(row_at(tail, 100)[6]), 0.0797885, 5e-8);
  EXPECT_EQ(number(row_at(tail, 1e4)[7]), 0.0); // Gaussian underflow
}

TEST(CmdDensity, BetaColumnsAndTailDefaults)
{
  const Table pdf = cmd_density(parse({ "--command", "pdf", "--beta", "0.25", "--beta",
                                        "-0.25", "--grid-points", "3" }));
  ASSERT_EQ(pdf.rows.size(), 3u);
  EXPECT_EQ(pdf.columns, (std::vector<std::string>{ "x", "beta_0.25", "beta_-0.25" }));
  EXPECT_EQ(number(pdf.rows[0][1]), number(pdf.rows[2][2]));
  EXPECT_NEAR(number(pdf.rows[1][1]), 2 * (1 - 0.0625) / (std::numbers::pi * 1.0625 * 1.0625),
              1e-15);

  const Table tail = cmd_density(parse({ "--command", "tail", "--beta", "1" }));
  EXPECT_EQ(tail.columns, (std::vector<std::string>{ "x", "exact_beta_1", "approx_beta_1" }));
  EXPECT_EQ(number(tail.rows.front()[0]), 1.0);
  EXPECT_NEAR(number(row_at(tail, 100)[1]), stable::levy_sf(100, 0, 1), 1e-16);
}

TEST(CmdChannelQuery, Examples)
{
  const Table c = cmd_channel_query(parse({ "--command", "pdf", "--channel-kind", "C", "--d",
                                            "1", "--Da", "4", "--Db", "1" }));
  EXPECT_NEAR(c.metadata["params"]["beta"].get<double>(), 0.33333, 5e-6);
  EXPECT_NEAR(c.metadata["params"]["c"].get<double>(), 1.125, 1e-15);
  EXPECT_EQ(c.metadata["symmetric"], false);
  EXPECT_EQ(c.metadata["support"], "full_line");

  const Table a =
    cmd_channel_query(parse({ "--command", "pdf", "--channel-kind", "A", "--d", "1", "--D",
                              "0.5", "--grid-min", "1", "--grid-max", "2", "--grid-points", "2" }));
  EXPECT_EQ(a.columns, (std::vector<std::string>{ "t", "pdf", "cf_modulus" }));
  EXPECT_NEAR(number(row_at(a, 1)[1]), 0.2419707, 5e-8);
  EXPECT_EQ(a.metadata["support"], "nonnegative");

  const Table b =
    cmd_channel_query(parse({ "--command", "cdf", "--channel-kind", "B", "--d", "1", "--D",
                              "2", "--grid-min", "-1", "--grid-max", "1", "--grid-points", "3" }));
  EXPECT_NEAR(number(row_at(b, 1)[2]), 0.36788, 5e-6);
  EXPECT_NEAR(number(row_at(b, 0)[1]), 0.5, 1e-15);
  EXPECT_EQ(b.metadata["symmetric"], true);

  const Table t = cmd_channel_query(
    parse({ "--command", "tail", "--channel-kind", "A", "--d", "1", "--D", "0.5" }));
  EXPECT_EQ(t.columns[1], "sf");
  EXPECT_NEAR(number(row_at(t, 100)[1]), stable::levy_sf(100, 0, 1), 1e-16);
}

TEST(CmdSample, MetadataAndDeterminism)
{
  const RunConfig cfg =
    parse({ "--command", "sample", "--channel-kind", "B", "--d", "1", "--D", "2", "--n", "1000" });
  const Table one = cmd_sample(cfg);
  EXPECT_EQ(one.rows.size(), 1000u);
  EXPECT_EQ(std::get<std::int64_t>(one.rows[999][0]), 999);
  EXPECT_EQ(one.metadata["seed"], sim::default_seed);
  EXPECT_EQ(one.metadata["ks"]["pass"], true);
  RunConfig more = cfg;
  more.threads = 3;
  EXPECT_EQ(to_csv(one), to_csv(cmd_sample(more)));
}

TEST(CmdValidate, PassesAndListsSuites)
{
  const auto report = cmd_validate(parse({ "--command", "validate", "--n", "100000" }));
  EXPECT_TRUE(report.pass);
  const auto& suites = report.table.metadata["suites"];
  EXPECT_GE(suites.size(), 6u);
  for (const char* s :
       { "specfun_identities", "symmetry", "cf_composition", "oracle_agreement", "ks", "tails" })
    EXPECT_NE(std::find(suites.begin(), suites.end(), s), suites.end()) << s;
}

TEST(CmdValidate, InjectedScaleFaultFails)
{
  const auto r = invoke({ "--command", "validate", "--n", "100000", "--fault-scale", "1.01",
                          "--out", (scratch_dir("fault") / "report.csv").string() });
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("FAIL cf_composition"), std::string::npos);
}

TEST(Run, ExitCodes)
{
  EXPECT_EQ(invoke({ "--help" }).code, 0);
  EXPECT_EQ(invoke({ "--command", "nope" }).code, 2);
  EXPECT_EQ(invoke({ "--command", "pdf", "--grid-points", "2" }).code, 0);
  EXPECT_EQ(invoke({ "--command", "pdf", "--out", "/nonexistent/dir/x.csv" }).code, 2);
  const auto q = invoke({ "--command", "pdf", "--channel-kind", "A", "--d", "1", "--D", "0.5",
                          "--grid-points", "2" });
  EXPECT_EQ(q.code, 0);
  EXPECT_NE(q.err.find("support=nonnegative"), std::string::npos);
  EXPECT_EQ(q.out.substr(0, 17), "t,pdf,cf_modulus\n");
}

TEST(Run, FiguresAreByteIdenticalAcrossThreadCounts)
{
  const auto a = scratch_dir("fig_a");
  const auto b = scratch_dir("fig_b");
  ASSERT_EQ(invoke({ "--out", a.string(), "--threads", "1" }).code, 0);
  ASSERT_EQ(invoke({ "--out", b.string(), "--threads", "4" }).code, 0);
  for (const char* f : { "pdf.csv", "cdf.csv", "tail.csv" }) {
    const std::string content = slurp(a / f);
    EXPECT_FALSE(content.empty());
    EXPECT_EQ(content.back(), '\n');
    EXPECT_EQ(content, slurp(b / f)) << f;
  }
}
