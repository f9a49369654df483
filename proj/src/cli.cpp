#include "molcom/cli.hpp"
#include "molcom/errors.hpp"
#include "molcom/specfun.hpp"
#include "molcom/stable.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <ostream>

namespace molcom::cli {

namespace {

using channels::ChannelConfig;
using channels::ChannelKind;
using stable::StableParams;

const std::map<std::string, Command> command_names = {
  { "pdf", Command::pdf },           { "cdf", Command::cdf },
  { "tail", Command::tail },         { "sample", Command::sample },
  { "validate", Command::validate }, { "figures", Command::figures },
};

constexpr const char* version = "1.0.0";

std::string
beta_label(double beta)
{
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, beta);
  return std::string(buf, res.ptr);
}

nlohmann::ordered_json
json_number(double v)
{
  if (!std::isfinite(v))
    return nullptr;
  return v;
}

nlohmann::ordered_json
params_json(const StableParams& p)
{
  return { { "mu", p.mu }, { "c", p.c }, { "alpha", p.alpha }, { "beta", p.beta } };
}

nlohmann::ordered_json
grid_json(const Grid& g, bool log_spaced)
{
  return { { "min", g.min },
           { "max", g.max },
           { "points", g.points },
           { "spacing", log_spaced ? "log10" : "linear" } };
}

nlohmann::ordered_json
channel_json(const ChannelConfig& ch)
{
  nlohmann::ordered_json j = { { "kind", channels::to_string(ch.kind) }, { "d", ch.d } };
  if (ch.D)
    j["D"] = *ch.D;
  if (ch.Da)
    j["Da"] = *ch.Da;
  if (ch.Db)
    j["Db"] = *ch.Db;
  if (ch.scale3d)
    j["scale3d"] = *ch.scale3d;
  return j;
}

nlohmann::ordered_json
base_metadata(const RunConfig& cfg)
{
  return { { "command", to_string(cfg.command) },
           { "version", { { "molcom", version }, { "schema", 1 } } } };
}

StableParams
standard_half(double beta)
{
  return { 0.0, 1.0, 0.5, beta };
}

void
check_grid(const Grid& g, bool log_spaced, const std::string& what)
{
  if (!std::isfinite(g.min) || !std::isfinite(g.max) || !(g.min < g.max))
    throw UsageError(what + ": min must be below max");
  if (g.points < 2)
    throw UsageError(what + ": at least 2 points required");
  if (log_spaced && !(g.min > 0.0))
    throw UsageError(what + ": log-spaced grid needs min > 0");
}

bool
tail_command(const RunConfig& cfg)
{
  return cfg.command == Command::tail;
}

void
write_text(const std::string& path, const std::string& text, std::ostream& out)
{
  if (path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file)
    throw UsageError("cannot open " + path + " for writing");
  file << text;
  file.close();
  if (!file)
    throw UsageError("error writing " + path);
}

std::string
render(const Table& table, Format format)
{
  return format == Format::csv ? to_csv(table) : to_json(table);
}

// ---------------------------------------------------------------- validate

struct Check
{
  std::string suite;
  std::string name;
  double measured;
  double tolerance;
};

class Suites
{
public:
  Suites(const RunConfig& cfg)
    : cfg_(cfg)
  {}

  std::vector<Check> run()
  {
    specfun_identities();
    symmetry();
    cf_composition();
    oracle_agreement();
    monte_carlo();
    tails();
    return std::move(checks_);
  }

private:
  void add(const char* suite, std::string name, double measured, double tolerance)
  {
    checks_.push_back({ suite, std::move(name), measured, tolerance });
  }

  // The analytic law a channel is claimed to follow, with the fault applied.
  StableParams model_under_test(const ChannelConfig& ch) const
  {
    StableParams p = channels::noise_model(ch).params;
    p.c *= cfg_.fault_scale;
    return p;
  }

  std::vector<ChannelConfig> channels_of(ChannelKind kind) const
  {
    std::vector<ChannelConfig> out;
    switch (kind) {
      case ChannelKind::A:
        out = { { ChannelKind::A, 1.0, 0.5, {}, {}, {} },
                { ChannelKind::A, 2e-6, 3e-10, {}, {}, {} } };
        break;
      case ChannelKind::B:
        out = { { ChannelKind::B, 1.0, 2.0, {}, {}, {} },
                { ChannelKind::B, 0.3, 0.05, {}, {}, {} } };
        break;
      case ChannelKind::C:
        out = { { ChannelKind::C, 1.0, {}, 4.0, 1.0, {} },
                { ChannelKind::C, 2.0, {}, 0.3, 7.0, {} } };
        break;
    }
    if (cfg_.channel && cfg_.channel->kind == kind)
      out.push_back(*cfg_.channel);
    return out;
  }

  static std::string describe(const ChannelConfig& ch)
  {
    std::string s = channels::to_string(ch.kind) + "(d=" + format_number(ch.d);
    if (ch.D)
      s += ",D=" + format_number(*ch.D);
    if (ch.Da)
      s += ",Da=" + format_number(*ch.Da) + ",Db=" + format_number(*ch.Db);
    if (ch.scale3d)
      s += ",scale3d=" + format_number(*ch.scale3d);
    return s + ")";
  }

  static std::vector<specfun::Complex> complex_grid()
  {
    const double xs[] = { -30, -9.5, -4, -1.7, -0.6, -0.05, 0, 0.003, 0.2, 0.9,
                          1.5, 3, 5.5, 10, 19, 30 };
    const double ys[] = { -8, -2.2, -0.3, 0, 1e-6, 0.04, 1.1, 6.8, 30 };
    std::vector<specfun::Complex> grid;
    for (double x : xs)
      for (double y : ys)
        grid.emplace_back(x, y);
    return grid;
  }

  void specfun_identities()
  {
    using specfun::Complex;
    const char* suite = "specfun_identities";
    double relation = 0, reflection = 0, voigt = 0;
    for (const Complex z : complex_grid()) {
      try {
        const Complex f = specfun::dawson(z);
        const Complex w = specfun::faddeeva(z);
        const Complex e = specfun::exp_neg_square(z);
        const Complex rhs = Complex(0, 0.5 / std::numbers::inv_sqrtpi) * (e - w);
        relation = std::max(relation, std::abs(f - rhs) / (1 + std::abs(f)));
        if (z.imag() >= 0) {
          const Complex lhs = specfun::faddeeva(-z);
          reflection = std::max(reflection, std::abs(lhs - (2.0 * e - w)) /
                                              (1 + std::abs(w) + std::abs(lhs)));
        }
        if (z.imag() > 0) {
          const Complex kl{ specfun::voigt_k(z.real(), z.imag()),
                            specfun::voigt_l(z.real(), z.imag()) };
          voigt = std::max(voigt, std::abs(kl - w) / std::abs(w));
        }
      } catch (const RangeError&) {
        // overflow region below the real axis
      }
    }
    add(suite, "dawson_faddeeva_relation", relation, 1e-11);
    add(suite, "faddeeva_reflection", reflection, 1e-11);
    add(suite, "voigt_decomposition", voigt, 1e-11);

    double real_axis = 0;
    for (double x = -26; x <= 26; x += 0.37) {
      const double want = std::exp(-x * x);
      real_axis =
        std::max(real_axis, std::abs(specfun::faddeeva({ x, 0.0 }).real() - want) / want);
    }
    add(suite, "real_axis_law", real_axis, 1e-11);

    // 60-digit reference values
    const Complex w_1_plus_i{ 0.30474420525691259246, 0.20821893820283162729 };
    double ref = std::abs(specfun::faddeeva({ 1, 1 }) - w_1_plus_i) / std::abs(w_1_plus_i);
    ref = std::max(ref, std::abs(specfun::dawson(0.5) / 0.42443638350202229593 - 1));
    ref = std::max(ref, std::abs(specfun::voigt_k(0, 1) / 0.42758357615580700441 - 1));
    add(suite, "reference_values", ref, 1e-12);
  }

  void symmetry()
  {
    const char* suite = "symmetry";
    double even = 0, odd = 0, skew = 0;
    for (double x = 0.01; x < 60; x *= 1.37) {
      const double f = stable::std_half_pdf(x, 0);
      even = std::max(even, std::abs(f - stable::std_half_pdf(-x, 0)) / f);
      odd = std::max(odd, std::abs(stable::std_half_cdf(x, 0) +
                                   stable::std_half_cdf(-x, 0) - 1));
      for (double s : { -x, x }) {
        const double g = stable::std_half_pdf(s, 0.5);
        skew = std::max(skew, std::abs(g - stable::std_half_pdf(-s, -0.5)) / g);
      }
    }
    add(suite, "beta0_pdf_even", even, 1e-12);
    add(suite, "beta0_cdf_odd", odd, 1e-12);
    add(suite, "skew_reflection_beta0.5", skew, 1e-12);

    for (const ChannelConfig& ch : channels_of(ChannelKind::B)) {
      const StableParams p = model_under_test(ch);
      double worst = std::abs(p.beta);
      for (double t : { 0.1, 1.0, 7.0 })
        worst = std::max(worst, std::abs(stable::cdf(t, p) + stable::cdf(-t, p) - 1));
      add(suite, "kind_b_symmetric " + describe(ch), worst, 1e-12);
    }
  }

  void cf_composition()
  {
    const char* suite = "cf_composition";
    std::vector<double> t(100);
    for (std::size_t i = 0; i < t.size(); ++i)
      t[i] = -50.0 + 100.0 * static_cast<double>(i) / 99.0;
    for (ChannelKind kind : { ChannelKind::B, ChannelKind::C })
      for (const ChannelConfig& ch : channels_of(kind)) {
        const channels::LevyPair pair = channels::levy_components(ch);
        const StableParams lead{ 0, pair.leading, 0.5, 1 };
        const StableParams trail{ 0, pair.trailing, 0.5, 1 };
        const StableParams model = model_under_test(ch);
        double worst = 0;
        for (double s : t)
          worst = std::max(worst, std::abs(stable::cf_stable(s, lead) *
                                             stable::cf_stable(-s, trail) -
                                           stable::cf_stable(s, model)));
        add(suite, "levy_difference " + describe(ch), worst, 1e-12);
      }
  }

  void oracle_agreement()
  {
    const char* suite = "oracle_agreement";
    for (double beta : { 0.0, 0.25, 0.5, 0.75 }) {
      const double b2 = beta * beta;
      const double peak = 2 * (1 - b2) / (std::numbers::pi * (1 + b2) * (1 + b2));
      const double err =
        std::max(std::abs(stable::std_half_pdf(0, beta) - peak),
                 std::abs(stable::cf_inversion_pdf(0, standard_half(beta)) - peak));
      add(suite, "peak_value beta=" + beta_label(beta), err, 1e-8);
    }
    for (double beta : { 0.0, 0.5, 1.0 }) {
      const StableParams p = standard_half(beta);
      double pdf_err = 0, cdf_err = 0;
      for (double x : { -20.0, -3.0, -0.4, 0.3, 1.0, 4.0, 25.0 }) {
        pdf_err = std::max(pdf_err, std::abs(stable::pdf(x, p) - stable::cf_inversion_pdf(x, p)));
        cdf_err = std::max(cdf_err, std::abs(stable::cdf(x, p) - stable::cf_inversion_cdf(x, p)));
      }
      add(suite, "closed_form_vs_inversion_pdf beta=" + beta_label(beta), pdf_err, 1e-8);
      add(suite, "closed_form_vs_inversion_cdf beta=" + beta_label(beta), cdf_err, 1e-8);
    }

    double levy = 0;
    for (int i = 1; i <= 100; ++i) {
      const double x = 0.5 * i;
      const double want = stable::levy_pdf(x, 0, 1);
      levy = std::max(levy, std::abs(stable::std_half_pdf(x, 1) - want) / want);
    }
    add(suite, "levy_member_equivalence", levy, 1e-10);

    // Kind A noise is the hitting time itself, Levy(0, d^2 / 2D) in seconds.
    for (const ChannelConfig& ch : channels_of(ChannelKind::A)) {
      const StableParams p = model_under_test(ch);
      const double c = ch.d * ch.d / (2 * *ch.D) * ch.scale3d.value_or(1.0);
      double worst = 0;
      for (double u : { 0.1, 0.5, 1.0, 3.0, 30.0, 1e3 }) {
        const double want = stable::levy_pdf(u * c, 0, c);
        worst = std::max(worst, std::abs(stable::pdf(u * c, p) - want) / want);
      }
      add(suite, "hitting_time_density " + describe(ch), worst, 1e-10);
    }
  }

  void monte_carlo()
  {
    const char* suite = "ks";
    const std::size_t n = cfg_.n_samples;
    const double one = cfg_.ks_threshold.value_or(sim::ks_threshold(n));
    const double two = cfg_.ks_threshold.value_or(sim::ks_threshold(n, n));
    std::uint64_t seed = cfg_.seed;
    for (ChannelKind kind : { ChannelKind::A, ChannelKind::B, ChannelKind::C })
      for (const ChannelConfig& ch : channels_of(kind)) {
        const auto batch = sim::sample_channel(ch, n, seed++, cfg_.threads);
        const auto report = sim::ks_test(batch.values, model_under_test(ch), one);
        add(suite, "channel_law " + describe(ch), report.ks_statistic, report.threshold);
      }

    // The proof's construction against a direct draw of the theorem law.
    for (const ChannelConfig& ch : channels_of(ChannelKind::C)) {
      const auto diff = sim::sample_channel(ch, n, seed++, cfg_.threads);
      const auto direct = sim::sample_stable(model_under_test(ch), n, seed++, cfg_.threads);
      const auto report = sim::ks_two_sample(diff.values, direct.values, two);
      add(suite, "difference_vs_direct " + describe(ch), report.ks_statistic, report.threshold);
    }

    // X1 + X2 has the law of 4 X for alpha = 1/2.
    const StableParams std0 = standard_half(0);
    auto x1 = sim::sample_stable(std0, n, seed++, cfg_.threads).values;
    const auto x2 = sim::sample_stable(std0, n, seed++, cfg_.threads).values;
    auto x4 = sim::sample_stable(std0, n, seed++, cfg_.threads).values;
    for (std::size_t i = 0; i < n; ++i) {
      x1[i] += x2[i];
      x4[i] *= 4;
    }
    add(suite, "stability_law", sim::ks_two_sample(x1, x4).ks_statistic, 3e-3);

    // Fraction of |X| > 100 against the two-sided tail prediction.
    const auto draws = sim::sample_stable(std0, n, seed++, cfg_.threads).values;
    const auto beyond = std::count_if(draws.begin(), draws.end(),
                                      [](double v) { return std::abs(v) > 100; });
    const double predicted = 2 * stable::tail_stable_half(100, 0);
    add(suite, "heavy_tail_fraction",
        std::abs(static_cast<double>(beyond) / static_cast<double>(n) / predicted - 1), 0.1);
  }

  void tails()
  {
    const char* suite = "tails";
    for (double beta : { 0.0, 0.5, 1.0 }) {
      double worst = 0;
      for (double x = 100; x <= 1e4; x *= 1.25) {
        const auto t = stable::tail_comparison(x, stable::TailFamily::stable_half, beta);
        worst = std::max(worst, std::abs(t.p_approx / t.p_exact - 1));
      }
      add(suite, "stable_tail_x>=100 beta=" + beta_label(beta), worst, 0.05);
    }
    double gauss = 0;
    for (double x = 3; x <= 40; x += 0.25) {
      const auto t = stable::tail_comparison(x, stable::TailFamily::gaussian);
      if (t.underflow)
        break;
      gauss = std::max(gauss, std::abs(t.p_approx / t.p_exact - 1));
    }
    add(suite, "gaussian_tail_x>=3", gauss, 0.1);
  }

  const RunConfig& cfg_;
  std::vector<Check> checks_;
};

} // namespace

std::string
to_string(Command command)
{
  for (const auto& [name, value] : command_names)
    if (value == command)
      return name;
  throw DomainError("unknown command");
}

std::string
to_string(Format format)
{
  return format == Format::csv ? "csv" : "json";
}

std::vector<double>
Grid::abscissae(bool log_spaced) const
{
  std::vector<double> x(points);
  const double lo = log_spaced ? std::log10(min) : min;
  const double hi = log_spaced ? std::log10(max) : max;
  const double last = static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) {
    const double k = static_cast<double>(i);
    const double v = (lo * (last - k) + hi * k) / last;
    x[i] = log_spaced ? std::pow(10.0, v) : v;
  }
  x.front() = min;
  x.back() = max;
  return x;
}

void
RunConfig::validate() const
{
  check_grid(grid, tail_command(*this), "grid");
  if (command == Command::figures)
    check_grid(tail_grid, true, "tail grid");
  for (double b : beta_list)
    if (!(b >= -1.0 && b <= 1.0))
      throw UsageError("beta must lie in [-1, 1], got " + format_number(b));
  if (n_samples == 0)
    throw UsageError("n must be positive");
  if (ks_threshold && !(*ks_threshold > 0.0 && *ks_threshold <= 1.0))
    throw UsageError("ks-threshold must lie in (0, 1]");
  if (!(fault_scale > 0.0) || !std::isfinite(fault_scale))
    throw UsageError("fault-scale must be positive");
  if (command == Command::sample && !channel)
    throw UsageError("sample needs --channel-kind");
  if (channel) {
    try {
      channel->validate();
    } catch (const DomainError& e) {
      throw UsageError(std::string("channel: ") + e.what());
    }
  }
}

std::vector<double>
RunConfig::betas() const
{
  if (!beta_list.empty())
    return beta_list;
  if (command == Command::figures)
    return { 0.0, 0.5, 1.0 };
  return { 0.0 };
}

RunConfig
parse_args(int argc, const char* const* argv)
{
  RunConfig cfg;
  CLI::App app{ "Stable-law noise models of diffusion timing channels", "molcom" };
  app.set_config("--config", "", "key = value file mirroring the long flags; flags win");
  app.allow_config_extras(false);

  std::string command = "figures";
  std::string kind, format = "csv";
  double d = 0, D = 0, Da = 0, Db = 0, scale3d = 1, ks = 0;
  app.add_option("--command", command, "pdf, cdf, tail, sample, validate or figures")
    ->check(CLI::IsMember({ "pdf", "cdf", "tail", "sample", "validate", "figures" }));
  app.add_option("--channel-kind", kind, "A, B or C; makes pdf/cdf/tail a channel query");
  app.add_option("--d", d, "transmitter-receiver distance");
  app.add_option("--D", D, "diffusion coefficient (kinds A, B)");
  app.add_option("--Da", Da, "diffusion coefficient of particle a (kind C)");
  app.add_option("--Db", Db, "diffusion coefficient of particle b (kind C)");
  app.add_option("--scale3d", scale3d, "user-supplied multiplier on the Levy scale");
  app.add_option("--beta", cfg.beta_list, "skewness; repeat for several curves");
  app.add_option("--grid-min", cfg.grid.min);
  app.add_option("--grid-max", cfg.grid.max);
  app.add_option("--grid-points", cfg.grid.points);
  app.add_option("--tail-min", cfg.tail_grid.min, "tail table range of figures");
  app.add_option("--tail-max", cfg.tail_grid.max);
  app.add_option("--tail-points", cfg.tail_grid.points);
  app.add_option("--seed", cfg.seed, "random seed")->capture_default_str();
  app.add_option("--n", cfg.n_samples, "Monte Carlo sample count")->capture_default_str();
  app.add_option("--out", cfg.output_path, "output file, or directory for figures; - is stdout");
  app.add_option("--format", format)->check(CLI::IsMember({ "csv", "json" }));
  app.add_option("--ks-threshold", ks, "KS pass threshold (default 1.63/sqrt(n))");
  app.add_option("--threads", cfg.threads, "worker threads, 0 = all cores");
  app.add_option("--fault-scale", cfg.fault_scale,
                 "validate only: perturb the scale of the laws under test");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  cfg.command = command_names.at(command);
  cfg.format = format == "json" ? Format::json : Format::csv;
  if (app.count("--ks-threshold"))
    cfg.ks_threshold = ks;
  if (tail_command(cfg) && !app.count("--grid-min") && !app.count("--grid-max") &&
      !app.count("--grid-points"))
    cfg.grid = cfg.tail_grid;

  const bool any_channel_flag = app.count("--d") || app.count("--D") || app.count("--Da") ||
                                app.count("--Db") || app.count("--scale3d");
  if (!kind.empty()) {
    ChannelConfig ch;
    try {
      ch.kind = channels::parse_channel_kind(kind);
    } catch (const DomainError& e) {
      throw UsageError(e.what());
    }
    if (!app.count("--d"))
      throw UsageError("--channel-kind needs --d");
    ch.d = d;
    if (app.count("--D"))
      ch.D = D;
    if (app.count("--Da"))
      ch.Da = Da;
    if (app.count("--Db"))
      ch.Db = Db;
    if (app.count("--scale3d"))
      ch.scale3d = scale3d;
    cfg.channel = ch;
  } else if (any_channel_flag) {
    throw UsageError("channel flags given without --channel-kind");
  }
  cfg.validate();
  return cfg;
}

std::string
format_number(double v)
{
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string
to_csv(const Table& table)
{
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i)
    out += (i ? "," : "") + table.columns[i];
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i)
        out += ',';
      if (const double* v = std::get_if<double>(&row[i]))
        out += format_number(*v);
      else if (const std::int64_t* k = std::get_if<std::int64_t>(&row[i]))
        out += std::to_string(*k);
      else
        out += std::get<std::string>(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string
to_json(const Table& table)
{
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (const double* v = std::get_if<double>(&row[i]))
        obj[table.columns[i]] = json_number(*v);
      else if (const std::int64_t* k = std::get_if<std::int64_t>(&row[i]))
        obj[table.columns[i]] = *k;
      else
        obj[table.columns[i]] = std::get<std::string>(row[i]);
    }
    rows.push_back(std::move(obj));
  }
  nlohmann::ordered_json doc = { { "name", table.name },
                                 { "metadata", table.metadata },
                                 { "columns", table.columns },
                                 { "rows", std::move(rows) } };
  return doc.dump(2) + "\n";
}

Table
cmd_density(const RunConfig& cfg)
{
  if (cfg.command != Command::pdf && cfg.command != Command::cdf && !tail_command(cfg))
    throw DomainError("density tables are for pdf, cdf and tail");
  const bool tail = tail_command(cfg);
  const auto xs = cfg.grid.abscissae(tail);
  const auto betas = cfg.betas();

  Table table;
  table.name = to_string(cfg.command);
  table.columns = { "x" };
  table.rows.assign(xs.size(), {});
  for (std::size_t i = 0; i < xs.size(); ++i)
    table.rows[i].push_back(xs[i]);

  nlohmann::ordered_json params = nlohmann::ordered_json::array();
  for (double beta : betas) {
    params.push_back(params_json(standard_half(beta)));
    const std::string label = beta_label(beta);
    if (tail) {
      table.columns.push_back("exact_beta_" + label);
      table.columns.push_back("approx_beta_" + label);
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const auto t = stable::tail_comparison(xs[i], stable::TailFamily::stable_half, beta);
        table.rows[i].push_back(t.p_exact);
        table.rows[i].push_back(t.p_approx);
      }
    } else {
      const auto d = stable::make_density_table(standard_half(beta), xs,
                                                stable::Method::closed_form, cfg.threads);
      table.columns.push_back("beta_" + label);
      for (std::size_t i = 0; i < xs.size(); ++i)
        table.rows[i].push_back(cfg.command == Command::pdf ? d.pdf[i] : d.cdf[i]);
    }
  }
  table.metadata = base_metadata(cfg);
  table.metadata["params"] = params;
  table.metadata["grid"] = grid_json(cfg.grid, tail);
  table.metadata["method"] = stable::to_string(stable::Method::closed_form);
  return table;
}

Table
cmd_channel_query(const RunConfig& cfg)
{
  if (!cfg.channel)
    throw UsageError("channel query needs --channel-kind");
  const bool tail = tail_command(cfg);
  const auto model = channels::noise_model(*cfg.channel);
  const auto ts = cfg.grid.abscissae(tail);
  const std::string value = tail ? "sf" : to_string(cfg.command);
  std::function<double(double)> eval;
  if (cfg.command == Command::pdf)
    eval = [&](double t) { return stable::pdf(t, model.params); };
  else if (cfg.command == Command::cdf)
    eval = [&](double t) { return stable::cdf(t, model.params); };
  else if (tail)
    eval = [&](double t) { return stable::sf(t, model.params); };
  else
    throw DomainError("channel queries are for pdf, cdf and tail");

  Table table;
  table.name = "channel_" + value;
  table.columns = { "t", value, "cf_modulus" };
  for (double t : ts)
    table.rows.push_back({ t, eval(t), std::abs(stable::cf_stable(t, model.params)) });
  table.metadata = base_metadata(cfg);
  table.metadata["channel"] = channel_json(*cfg.channel);
  table.metadata["params"] = params_json(model.params);
  table.metadata["symmetric"] = model.symmetric;
  table.metadata["support"] = channels::to_string(model.support);
  table.metadata["grid"] = grid_json(cfg.grid, tail);
  return table;
}

Table
cmd_sample(const RunConfig& cfg)
{
  if (!cfg.channel)
    throw UsageError("sample needs --channel-kind");
  const auto batch = sim::sample_channel(*cfg.channel, cfg.n_samples, cfg.seed, cfg.threads);
  const auto report = sim::ks_test(batch, batch.model, cfg.ks_threshold);

  Table table;
  table.name = "sample";
  table.columns = { "index", "value" };
  table.rows.reserve(batch.values.size());
  for (std::size_t i = 0; i < batch.values.size(); ++i)
    table.rows.push_back({ static_cast<std::int64_t>(i), batch.values[i] });
  table.metadata = base_metadata(cfg);
  table.metadata["channel"] = channel_json(*cfg.channel);
  table.metadata["params"] = params_json(batch.model.params);
  table.metadata["seed"] = batch.seed;
  table.metadata["count"] = batch.count;
  table.metadata["ks"] = { { "statistic", report.ks_statistic },
                           { "sample_count", report.sample_count },
                           { "threshold", report.threshold },
                           { "pass", report.pass } };
  return table;
}

std::vector<Table>
cmd_figures(const RunConfig& cfg)
{
  const auto xs = cfg.grid.abscissae(false);
  const auto betas = cfg.betas();

  Table pdf_table, cdf_table;
  pdf_table.name = "pdf";
  cdf_table.name = "cdf";
  pdf_table.columns = cdf_table.columns = { "x" };
  pdf_table.rows.assign(xs.size(), {});
  cdf_table.rows.assign(xs.size(), {});
  for (std::size_t i = 0; i < xs.size(); ++i) {
    pdf_table.rows[i].push_back(xs[i]);
    cdf_table.rows[i].push_back(xs[i]);
  }
  std::vector<StableParams> laws;
  std::vector<std::string> labels;
  for (double beta : betas) {
    laws.push_back(standard_half(beta));
    labels.push_back("beta_" + beta_label(beta));
  }
  laws.push_back(stable::standard_gaussian);
  labels.push_back("gaussian");

  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (std::size_t k = 0; k < laws.size(); ++k) {
    const auto d =
      stable::make_density_table(laws[k], xs, stable::Method::closed_form, cfg.threads);
    pdf_table.columns.push_back(labels[k]);
    cdf_table.columns.push_back(labels[k]);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      pdf_table.rows[i].push_back(d.pdf[i]);
      cdf_table.rows[i].push_back(d.cdf[i]);
    }
    params[labels[k]] = params_json(laws[k]);
  }
  for (Table* t : { &pdf_table, &cdf_table }) {
    t->metadata = base_metadata(cfg);
    t->metadata["params"] = params;
    t->metadata["grid"] = grid_json(cfg.grid, false);
    t->metadata["method"] = stable::to_string(stable::Method::closed_form);
  }

  Table tail;
  tail.name = "tail";
  tail.columns = { "x" };
  const auto ts = cfg.tail_grid.abscissae(true);
  for (double beta : betas) {
    tail.columns.push_back("exact_beta_" + beta_label(beta));
    tail.columns.push_back("approx_beta_" + beta_label(beta));
  }
  tail.columns.push_back("gaussian_exact");
  tail.columns.push_back("gaussian_approx");
  for (double x : ts) {
    std::vector<Cell> row{ x };
    for (double beta : betas) {
      const auto t = stable::tail_comparison(x, stable::TailFamily::stable_half, beta);
      row.push_back(t.p_exact);
      row.push_back(t.p_approx);
    }
    const auto g = stable::tail_comparison(x, stable::TailFamily::gaussian);
    row.push_back(g.p_exact);
    row.push_back(g.p_approx);
    tail.rows.push_back(std::move(row));
  }
  tail.metadata = base_metadata(cfg);
  tail.metadata["params"] = params;
  tail.metadata["grid"] = grid_json(cfg.tail_grid, true);
  tail.metadata["stable_approx"] = "(1 + beta) / sqrt(2 pi x)";
  tail.metadata["gaussian_approx"] = "exp(-x^2 / 2) / (x sqrt(2 pi))";
  tail.metadata["underflow"] = stable::tail_underflow;
  return { std::move(pdf_table), std::move(cdf_table), std::move(tail) };
}

ValidationReport
cmd_validate(const RunConfig& cfg)
{
  ValidationReport report;
  Table& table = report.table;
  table.name = "validation";
  table.columns = { "suite", "check", "measured", "tolerance", "pass" };
  report.pass = true;
  nlohmann::ordered_json suites = nlohmann::ordered_json::array();
  for (const Check& c : Suites(cfg).run()) {
    const bool ok = c.measured <= c.tolerance;
    report.pass = report.pass && ok;
    table.rows.push_back({ c.suite, c.name, c.measured, c.tolerance, ok ? "true" : "false" });
    if (suites.empty() || suites.back() != c.suite)
      suites.push_back(c.suite);
  }
  table.metadata = base_metadata(cfg);
  table.metadata["seed"] = cfg.seed;
  table.metadata["n"] = cfg.n_samples;
  table.metadata["fault_scale"] = cfg.fault_scale;
  table.metadata["suites"] = suites;
  table.metadata["pass"] = report.pass;
  return report;
}

int
run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
  RunConfig cfg;
  try {
    cfg = parse_args(argc, argv);
  } catch (const HelpRequested& h) {
    out << h.what();
    return 0;
  } catch (const UsageError& e) {
    err << "molcom: " << e.what() << "\n";
    return 2;
  }

  try {
    const std::string ext = cfg.format == Format::csv ? ".csv" : ".json";
    switch (cfg.command) {
      case Command::figures: {
        namespace fs = std::filesystem;
        const fs::path dir = cfg.output_path == "-" ? fs::path(".") : fs::path(cfg.output_path);
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec)
          throw UsageError("cannot create directory " + dir.string() + ": " + ec.message());
        for (const Table& t : cmd_figures(cfg))
          write_text((dir / (t.name + ext)).string(), render(t, cfg.format), out);
        return 0;
      }
      case Command::validate: {
        const auto report = cmd_validate(cfg);
        write_text(cfg.output_path, render(report.table, cfg.format), out);
        std::size_t failed = 0;
        for (const auto& row : report.table.rows)
          if (std::get<std::string>(row.back()) != "true") {
            ++failed;
            err << "FAIL " << std::get<std::string>(row[0]) << " "
                << std::get<std::string>(row[1]) << "\n";
          }
        err << "validate: " << report.table.rows.size() << " checks, " << failed
            << " failed\n";
        return report.pass ? 0 : 1;
      }
      case Command::sample:
        write_text(cfg.output_path, render(cmd_sample(cfg), cfg.format), out);
        return 0;
      case Command::pdf:
      case Command::cdf:
      case Command::tail: {
        if (!cfg.channel) {
          write_text(cfg.output_path, render(cmd_density(cfg), cfg.format), out);
          return 0;
        }
        const Table t = cmd_channel_query(cfg);
        const auto& m = t.metadata;
        err << "channel " << m["channel"]["kind"].get<std::string>() << ": S(mu="
            << format_number(m["params"]["mu"]) << ", c=" << format_number(m["params"]["c"])
            << ", alpha=" << format_number(m["params"]["alpha"])
            << ", beta=" << format_number(m["params"]["beta"])
            << ") symmetric=" << (m["symmetric"].get<bool>() ? "true" : "false")
            << " support=" << m["support"].get<std::string>() << "\n";
        write_text(cfg.output_path, render(t, cfg.format), out);
        return 0;
      }
    }
  } catch (const UsageError& e) {
    err << "molcom: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    err << "molcom: " << e.what() << "\n";
    return 2;
  } catch (const ConvergenceError& e) {
    err << "molcom: " << e.what() << "\n";
    return 3;
  } catch (const RangeError& e) {
    err << "molcom: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

} // namespace molcom::cli
