#include "molcom/sim.hpp"

#include "molcom/errors.hpp"
#include "molcom/parallel.hpp"
#include "molcom/philox.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace molcom::sim {

namespace {

constexpr double pi = std::numbers::pi;

// Both Box-Muller normals from the block for draw i.
std::array<double, 2>
normal_pair(const Philox4x32& rng, std::uint64_t i)
{
  const auto [u1, u2] = Philox4x32::to_unit_pair(rng(i, 0));
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * pi * u2;
  return { r * std::cos(theta), r * std::sin(theta) };
}

template<class Draw>
SampleBatch
generate(std::size_t n, std::uint64_t seed, unsigned threads,
         const channels::ChannelNoiseModel& model, Draw&& draw)
{
  if (n == 0)
    throw DomainError("sample count must be positive");
  SampleBatch batch;
  batch.values.resize(n);
  batch.seed = seed;
  batch.count = n;
  batch.model = model;
  const Philox4x32 rng(seed);
  parallel_for(n, threads, [&](std::size_t i) { batch.values[i] = draw(rng, i); });
  return batch;
}

// One-sample statistic of already sorted values against model cdf values.
double
ks_statistic_sorted(std::span<const double> sorted, std::span<const double> model_cdf)
{
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = model_cdf[i];
    d = std::max({ d, (i + 1) / n - f, f - i / n });
  }
  return d;
}

GofReport
make_report(double statistic, std::size_t count, double threshold)
{
  return { statistic, count, threshold, statistic <= threshold };
}

} // namespace

SampleBatch
sample_levy(double mu, double c, std::size_t n, std::uint64_t seed, unsigned threads)
{
  if (!(c > 0.0) || !std::isfinite(c) || !std::isfinite(mu))
    throw DomainError("Levy sampling needs finite mu and c > 0");
  const auto model = channels::make_noise_model({ mu, c, 0.5, 1.0 });
  return generate(n, seed, threads, model, [&](const Philox4x32& rng, std::size_t i) {
    const double g = normal_pair(rng, i)[0];
    return mu + c / (g * g);
  });
}

SampleBatch
sample_channel(const channels::ChannelConfig& cfg, std::size_t n, std::uint64_t seed,
               unsigned threads)
{
  const auto model = channels::noise_model(cfg);
  if (cfg.kind == channels::ChannelKind::A)
    return generate(n, seed, threads, model, [&](const Philox4x32& rng, std::size_t i) {
      const double g = normal_pair(rng, i)[0];
      return model.params.c / (g * g);
    });
  const auto pair = channels::levy_components(cfg);
  return generate(n, seed, threads, model, [&](const Philox4x32& rng, std::size_t i) {
    const auto [g_lead, g_trail] = normal_pair(rng, i);
    return pair.leading / (g_lead * g_lead) - pair.trailing / (g_trail * g_trail);
  });
}

SampleBatch
sample_stable(const stable::StableParams& params, std::size_t n, std::uint64_t seed,
              unsigned threads)
{
  const auto std_form = stable::standardize(params);
  const double alpha = params.alpha;
  const double beta = params.beta;
  const double c = params.c;
  const auto model = channels::make_noise_model(params);

  if (alpha == 1.0) {
    return generate(n, seed, threads, model, [&](const Philox4x32& rng, std::size_t i) {
      const auto [u, e] = Philox4x32::to_unit_pair(rng(i, 0));
      const double v = pi * (u - 0.5);
      const double w = -std::log(e);
      const double lead = pi / 2 + beta * v;
      const double x =
        2.0 / pi * (lead * std::tan(v) - beta * std::log(pi / 2 * w * std::cos(v) / lead));
      return std_form.map.inverse(x);
    });
  }

  const double skew = beta * std::tan(pi * alpha / 2);
  const double b = std::atan(skew) / alpha;
  const double s = std::pow(1.0 + skew * skew, 1.0 / (2.0 * alpha));
  return generate(n, seed, threads, model, [&](const Philox4x32& rng, std::size_t i) {
    const auto [u, e] = Philox4x32::to_unit_pair(rng(i, 0));
    const double v = pi * (u - 0.5);
    const double w = -std::log(e);
    const double x = s * std::sin(alpha * (v + b)) / std::pow(std::cos(v), 1.0 / alpha) *
                     std::pow(std::cos(v - alpha * (v + b)) / w, (1.0 - alpha) / alpha);
    return params.mu + c * x;
  });
}

double
ks_threshold(std::size_t n)
{
  return 1.63 / std::sqrt(static_cast<double>(n));
}

double
ks_threshold(std::size_t n, std::size_t m)
{
  const double dn = static_cast<double>(n);
  const double dm = static_cast<double>(m);
  return 1.63 * std::sqrt((dn + dm) / (dn * dm));
}

GofReport
ks_test(std::span<const double> values, const stable::StableParams& params,
        std::optional<double> threshold)
{
  if (values.empty())
    throw DomainError("KS test needs at least one sample");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const auto model_cdf = stable::cdf_sorted(sorted, params);
  return make_report(ks_statistic_sorted(sorted, model_cdf), sorted.size(),
                     threshold.value_or(ks_threshold(sorted.size())));
}

GofReport
ks_test(const SampleBatch& batch, const channels::ChannelNoiseModel& model,
        std::optional<double> threshold)
{
  return ks_test(batch.values, model.params, threshold);
}

GofReport
ks_two_sample(std::span<const double> a, std::span<const double> b,
              std::optional<double> threshold)
{
  if (a.empty() || b.empty())
    throw DomainError("two-sample KS test needs two non-empty samples");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double n = static_cast<double>(x.size());
  const double m = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    // Step past every copy of the smaller value before comparing.
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v)
      ++i;
    while (j < y.size() && y[j] == v)
      ++j;
    d = std::max(d, std::abs(i / n - j / m));
  }
  return make_report(d, x.size() + y.size(),
                     threshold.value_or(ks_threshold(x.size(), y.size())));
}

SampleBatch
fold_observable_b(double l_x, const SampleBatch& batch)
{
  if (!batch.model.symmetric || batch.folded_offset)
    throw DomainError("fold_observable_b expects an unfolded symmetric (kind B) noise batch");
  if (!std::isfinite(l_x))
    throw DomainError("fold offset must be finite");
  SampleBatch out = batch;
  for (double& v : out.values)
    v = std::abs(l_x + v);
  out.folded_offset = l_x;
  return out;
}

} // namespace molcom::sim
