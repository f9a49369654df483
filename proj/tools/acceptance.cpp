// Acceptance checks 1-9: one PASS/FAIL line each, exit 1 if any fails.
// Pass criterion numbers as arguments to run a subset.

#include "molcom/channels.hpp"
#include "molcom/cli.hpp"
#include "molcom/errors.hpp"
#include "molcom/sim.hpp"
#include "molcom/specfun.hpp"
#include "molcom/stable.hpp"

#include "fixture_io.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace molcom;
using specfun::Complex;
using stable::StableParams;

namespace {

struct Verdict
{
  bool pass;
  std::string detail;
};

std::string
fmt(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

StableParams
standard_half(double beta)
{
  return { 0, 1, 0.5, beta };
}

Verdict
peak_value()
{
  const double at_zero = std::abs(stable::pdf(0, standard_half(0)) - 2 / std::numbers::pi);
  double worst = 0;
  for (double beta : { 0.0, 0.25, 0.5, 0.75 }) {
    const double b2 = beta * beta;
    const double formula = 2 * (1 - b2) / (std::numbers::pi * (1 + b2) * (1 + b2));
    const double oracle = stable::cf_inversion_pdf(0, standard_half(beta));
    worst = std::max({ worst, std::abs(formula - oracle),
                       std::abs(stable::pdf(0, standard_half(beta)) - oracle) });
  }
  return { at_zero <= 1e-10 && worst <= 1e-8,
           "|f(0)-2/pi| = " + fmt(at_zero) + ", max deviation from inversion oracle = " +
             fmt(worst) };
}

Verdict
levy_member()
{
  double worst = 0;
  for (int i = 1; i <= 100; ++i) {
    const double x = 0.5 * i;
    const double want = stable::levy_pdf(x, 0, 1);
    worst = std::max(worst, std::abs(stable::std_half_pdf(x, 1) - want) / want);
  }
  return { worst <= 1e-10, "max relative difference on (0, 50] = " + fmt(worst) };
}

Verdict
cf_identities()
{
  std::mt19937_64 rng(20120601);
  auto log_uniform = [&](double lo, double hi) {
    return std::exp(std::uniform_real_distribution<double>(std::log(lo), std::log(hi))(rng));
  };
  double worst = 0;
  for (int i = 0; i < 20; ++i) {
    // micrometre-to-millimetre links, diffusion 1e-12 .. 1e-9 m^2/s
    const double d = log_uniform(1e-6, 1e-3);
    const channels::ChannelConfig b{ channels::ChannelKind::B, d, log_uniform(1e-12, 1e-9),
                                     {}, {}, {} };
    const channels::ChannelConfig c{ channels::ChannelKind::C, d, {},
                                     log_uniform(1e-12, 1e-9), log_uniform(1e-12, 1e-9), {} };
    for (const auto& cfg : { b, c }) {
      // |c t| up to 50 so the characteristic function is far from negligible
      const double scale = channels::noise_model(cfg).params.c;
      std::vector<double> t(100);
      for (int k = 0; k < 100; ++k)
        t[k] = (-50.0 + 100.0 * k / 99.0) / scale;
      worst = std::max(worst, channels::verify_cf_composition(cfg, t));
    }
  }
  return { worst <= 1e-12, "max |phi_lead phi_trail - phi_model| over 40 configs = " + fmt(worst) };
}

cli::RunConfig
parse(std::vector<std::string> args)
{
  args.insert(args.begin(), "molcom");
  std::vector<const char*> argv;
  for (const auto& a : args)
    argv.push_back(a.c_str());
  return cli::parse_args(static_cast<int>(argv.size()), argv.data());
}

Verdict
density_figures()
{
  const auto tables = cli::cmd_figures(parse({ "--command", "figures" }));
  const cli::Table& pdf = tables[0];
  const cli::Table& cdf = tables[1];
  auto at = [](const cli::Table& t, std::size_t row, std::size_t col) {
    return std::get<double>(t.rows[row][col]);
  };
  // columns: x, beta_0, beta_0.5, beta_1, gaussian
  const std::size_t n = pdf.rows.size();
  double asym = 0;
  bool negative_zero = true, longer = true;
  std::string where;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = at(pdf, i, 0);
    const std::size_t j = n - 1 - i;
    asym = std::max({ asym, std::abs(at(pdf, i, 1) - at(pdf, j, 1)) / at(pdf, i, 1),
                      std::abs(at(cdf, i, 1) + at(cdf, j, 1) - 1) });
    if (x < 0)
      negative_zero = negative_zero && at(pdf, i, 3) == 0 && at(cdf, i, 3) == 0;
    if (std::abs(x) >= 6)
      for (std::size_t col = 1; col <= 3; ++col) {
        // beta = 1 has no mass left of the origin
        if (col == 3 && x < 0)
          continue;
        if (!(at(pdf, i, col) > at(pdf, i, 4))) {
          longer = false;
          where = " (fails at x=" + fmt(x) + ", " + pdf.columns[col] + ")";
        }
      }
  }
  return { asym <= 1e-14 && negative_zero && longer,
           "beta=0 asymmetry " + fmt(asym) + ", beta=1 zero for x<0: " +
             (negative_zero ? "yes" : "no") + ", stable pdf > Gaussian for |x|>=6 on support: " +
             (longer ? "yes" : "no") + where };
}

Verdict
tail_figure()
{
  bool ok = true;
  std::string detail;
  for (double beta : { 0.0, 0.5, 1.0 }) {
    double worst = 0, arg = 0;
    for (double x = 50; x <= 1e6; x *= 1.05) {
      const auto t = stable::tail_comparison(x, stable::TailFamily::stable_half, beta);
      const double err = std::abs(t.p_approx / t.p_exact - 1);
      if (err > worst)
        worst = err, arg = x;
    }
    ok = ok && worst <= 0.05;
    detail += "beta=" + fmt(beta) + " max rel err " + fmt(worst) + " at x=" + fmt(arg) + "; ";
  }
  double gauss = 0;
  double last = 3;
  for (double x = 3; x <= 40; x += 0.05) {
    const auto t = stable::tail_comparison(x, stable::TailFamily::gaussian);
    if (t.underflow)
      break;
    gauss = std::max(gauss, std::abs(t.p_approx / t.p_exact - 1));
    last = x;
  }
  ok = ok && gauss <= 0.1;
  detail += "Gaussian max rel err " + fmt(gauss) + " on [3, " + fmt(last) + "]";
  return { ok, detail };
}

Verdict
monte_carlo()
{
  using channels::ChannelKind;
  const std::size_t n = 1000000;
  const std::vector<channels::ChannelConfig> configs = {
    { ChannelKind::A, 1.0, 0.5, {}, {}, {} },  { ChannelKind::A, 2e-6, 3e-10, {}, {}, {} },
    { ChannelKind::A, 5e-5, 1e-9, {}, {}, 0.4 },  { ChannelKind::B, 1.0, 2.0, {}, {}, {} },
    { ChannelKind::B, 0.3, 0.05, {}, {}, {} },    { ChannelKind::B, 1e-5, 8e-11, {}, {}, {} },
    { ChannelKind::C, 1.0, {}, 4.0, 1.0, {} },    { ChannelKind::C, 2.0, {}, 0.3, 7.0, {} },
    { ChannelKind::C, 1e-5, {}, 2e-10, 9e-10, {} },
  };
  std::uint64_t seed = 1000;
  double worst_one = 0, worst_two = 0;
  bool ok = true;
  for (const auto& cfg : configs) {
    const auto batch = sim::sample_channel(cfg, n, seed++, 0);
    const auto r = sim::ks_test(batch, batch.model);
    ok = ok && r.pass;
    worst_one = std::max(worst_one, r.ks_statistic);
    if (cfg.kind != ChannelKind::A) {
      const auto direct = sim::sample_stable(batch.model.params, n, seed++, 0);
      const auto two = sim::ks_two_sample(batch.values, direct.values);
      ok = ok && two.pass;
      worst_two = std::max(worst_two, two.ks_statistic);
    }
  }
  return { ok, "9 channel laws: max D = " + fmt(worst_one) + " (threshold " +
                 fmt(sim::ks_threshold(n)) + "); 6 difference-vs-direct pairs: max D = " +
                 fmt(worst_two) + " (two-sample threshold " + fmt(sim::ks_threshold(n, n)) +
                 ")" };
}

Verdict
stability_law()
{
  const std::size_t n = 1000000;
  auto x1 = sim::sample_stable(standard_half(0), n, 71, 0).values;
  const auto x2 = sim::sample_stable(standard_half(0), n, 72, 0).values;
  auto x4 = sim::sample_stable(standard_half(0), n, 73, 0).values;
  for (std::size_t i = 0; i < n; ++i) {
    x1[i] += x2[i];
    x4[i] *= 4;
  }
  const double d = sim::ks_two_sample(x1, x4).ks_statistic;
  return { d <= 3e-3, "KS distance (X1+X2) vs 4X = " + fmt(d) };
}

Verdict
special_functions()
{
  using testing::max_component_error;
  const auto w_fix = testing::read_complex_fixture("faddeeva.csv");
  const auto f_fix = testing::read_complex_fixture("dawson.csv");
  double w_err = 0, f_err = 0, v_err = 0;
  std::size_t voigt_points = 0;
  for (const auto& f : w_fix) {
    w_err = std::max(w_err, max_component_error(specfun::faddeeva(f.z), f.value));
    if (f.z.imag() > 0) {
      ++voigt_points;
      const Complex kl{ specfun::voigt_k(f.z.real(), f.z.imag()),
                        specfun::voigt_l(f.z.real(), f.z.imag()) };
      v_err = std::max(v_err, max_component_error(kl, f.value));
    }
  }
  for (const auto& f : f_fix)
    f_err = std::max(f_err, max_component_error(specfun::dawson(f.z), f.value));

  double relation = 0, reflection = 0, decomposition = 0, real_axis = 0;
  for (double x = -30; x <= 30; x += 1.37)
    for (double y = -30; y <= 30; y += 1.13) {
      const Complex z{ x, y };
      try {
        const Complex f = specfun::dawson(z);
        const Complex w = specfun::faddeeva(z);
        const Complex e = specfun::exp_neg_square(z);
        relation = std::max(relation,
                            std::abs(f - Complex(0, 0.5 / std::numbers::inv_sqrtpi) * (e - w)) /
                              (1 + std::abs(f)));
        if (y > 0) {
          const Complex lhs = specfun::faddeeva(-z);
          reflection = std::max(reflection, std::abs(lhs - (2.0 * e - w)) /
                                              (1 + std::abs(w) + std::abs(lhs)));
          const Complex kl{ specfun::voigt_k(x, y), specfun::voigt_l(x, y) };
          decomposition = std::max(decomposition, std::abs(kl - w) / std::abs(w));
        }
      } catch (const RangeError&) {
        // e^{-z^2} or w(z) not representable
      }
    }
  for (double x = -26; x <= 26; x += 0.01) {
    const double want = std::exp(-x * x);
    real_axis = std::max(real_axis, std::abs(specfun::faddeeva({ x, 0 }).real() - want) / want);
  }
  const double fixtures = std::max({ w_err, f_err, v_err });
  const double identities = std::max({ relation, reflection, decomposition, real_axis });
  const bool enough = w_fix.size() >= 500 && f_fix.size() >= 500 && voigt_points >= 500;
  return { enough && fixtures <= 1e-12 && identities <= 1e-11,
           "fixtures (" + std::to_string(w_fix.size()) + " w, " + std::to_string(f_fix.size()) +
             " F, " + std::to_string(voigt_points) + " K/L points) max rel err " + fmt(fixtures) +
             "; identities max err " + fmt(identities) };
}

std::string
slurp(const std::filesystem::path& p)
{
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int
invoke(std::vector<std::string> args)
{
  args.insert(args.begin(), "molcom");
  std::vector<const char*> argv;
  for (const auto& a : args)
    argv.push_back(a.c_str());
  std::ostringstream out, err;
  return cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
}

Verdict
determinism()
{
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "molcom_acceptance";
  fs::remove_all(root);
  const char* runs[][2] = { { "run1", "1" }, { "run2", "1" }, { "run3", "4" } };
  for (const auto& [name, threads] : runs) {
    const fs::path dir = root / name;
    fs::create_directories(dir);
    for (const char* format : { "csv", "json" })
      if (invoke({ "--command", "figures", "--threads", threads, "--format", format, "--out",
                   (dir / "figures").string() }) != 0)
        return { false, "figures run failed" };
    if (invoke({ "--command", "validate", "--threads", threads, "--format", "json", "--out",
                 (dir / "validate.json").string() }) != 0)
      return { false, "validate run failed" };
  }
  const std::vector<std::string> files = { "figures/pdf.csv",  "figures/cdf.csv",
                                           "figures/tail.csv", "figures/pdf.json",
                                           "figures/cdf.json", "figures/tail.json",
                                           "validate.json" };
  std::size_t identical = 0;
  for (const auto& f : files) {
    const std::string ref = slurp(root / "run1" / f);
    if (!ref.empty() && ref == slurp(root / "run2" / f) && ref == slurp(root / "run3" / f))
      ++identical;
  }
  fs::remove_all(root);
  return { identical == files.size(),
           std::to_string(identical) + "/" + std::to_string(files.size()) +
             " outputs byte-identical over 2 single-thread runs and a 4-thread run" };
}

} // namespace

int
main(int argc, char** argv)
{
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
    { "standardized peak value", peak_value },
    { "Levy member equivalence", levy_member },
    { "noise composition as CF identities", cf_identities },
    { "pdf/cdf figure tables", density_figures },
    { "tail figure table", tail_figure },
    { "Monte Carlo agreement", monte_carlo },
    { "stability law", stability_law },
    { "special-function certification", special_functions },
    { "determinism", determinism },
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i)
    only.insert(std::atoi(argv[i]));

  int failed = 0, ran = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id))
      continue;
    ++ran;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = { false, std::string("exception: ") + e.what() };
    }
    const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %d (%s): %s [%.1f s]\n", v.pass ? "PASS" : "FAIL", id,
                criteria[i].first, v.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !v.pass;
  }
  std::printf("%d/%d criteria passed\n", ran - failed, ran);
  return failed ? 1 : 0;
}
