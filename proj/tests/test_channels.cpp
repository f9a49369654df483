#include "molcom/channels.hpp"
#include "molcom/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace molcom;
using namespace molcom::channels;

namespace {

ChannelConfig
kind_a(double d, double D)
{
  return { ChannelKind::A, d, D, {}, {}, {} };
}

ChannelConfig
kind_b(double d, double D)
{
  return { ChannelKind::B, d, D, {}, {}, {} };
}

ChannelConfig
kind_c(double d, double Da, double Db)
{
  return { ChannelKind::C, d, {}, Da, Db, {} };
}

std::vector<double>
t_grid()
{
  std::vector<double> t(100);
  for (int i = 0; i < 100; ++i)
    t[i] = -50.0 + 100.0 * i / 99.0;
  return t;
}

double
log_uniform(std::mt19937_64& rng, double lo, double hi)
{
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

} // namespace

TEST(ChannelConfig, Validation)
{
  EXPECT_NO_THROW(kind_a(1, 0.5).validate());
  EXPECT_THROW(kind_a(0, 0.5).validate(), DomainError);
  EXPECT_THROW(kind_a(1, -1).validate(), DomainError);
  EXPECT_THROW((ChannelConfig{ ChannelKind::B, 1, {}, 1.0, 1.0, {} }.validate()), DomainError);
  EXPECT_THROW((ChannelConfig{ ChannelKind::C, 1, 1.0, {}, 1.0, {} }.validate()), DomainError);
  ChannelConfig bad_scale = kind_a(1, 1);
  bad_scale.scale3d = 0.0;
  EXPECT_THROW(bad_scale.validate(), DomainError);
}

TEST(ChannelKind, Parsing)
{
  EXPECT_EQ(parse_channel_kind("a"), ChannelKind::A);
  EXPECT_EQ(parse_channel_kind("C"), ChannelKind::C);
  EXPECT_THROW(parse_channel_kind("D"), DomainError);
  EXPECT_THROW(parse_channel_kind("AB"), DomainError);
  EXPECT_EQ(to_string(ChannelKind::B), "B");
}

TEST(NoiseModelA, Examples)
{
  EXPECT_EQ(noise_model_a(kind_a(1, 0.5)).params, (stable::StableParams{ 0, 1, 0.5, 1 }));
  const ChannelNoiseModel m = noise_model_a(kind_a(2, 1));
  EXPECT_EQ(m.params.c, 2.0);
  EXPECT_EQ(m.support, Support::nonnegative);
  EXPECT_FALSE(m.symmetric);
  EXPECT_NEAR(stable::pdf(m.params.c, m.params), stable::levy_pdf(2, 0, 2), 1e-15);
  EXPECT_THROW(noise_model_a(kind_b(1, 1)), DomainError);
}

TEST(NoiseModelA, ScaleMultiplier)
{
  ChannelConfig cfg = kind_a(1, 0.5);
  cfg.scale3d = 2.5;
  EXPECT_EQ(noise_model_a(cfg).params.c, 2.5);
}

TEST(NoiseModelB, Examples)
{
  const ChannelNoiseModel m = noise_model_b(kind_b(1, 0.5));
  EXPECT_EQ(m.params, (stable::StableParams{ 0, 4, 0.5, 0 }));
  EXPECT_TRUE(m.symmetric);
  EXPECT_EQ(m.support, Support::full_line);
  const auto phi = stable::cf_stable(1.0, noise_model_b(kind_b(1, 2)).params);
  EXPECT_NEAR(phi.real(), std::exp(-1.0), 1e-15);
  EXPECT_EQ(phi.imag(), 0.0);
}

TEST(NoiseModelC, Examples)
{
  const ChannelNoiseModel m = noise_model_c(kind_c(1, 4, 1));
  EXPECT_NEAR(m.params.beta, 1.0 / 3.0, 1e-16);
  EXPECT_NEAR(m.params.c, 9.0 / 8.0, 1e-15);
  EXPECT_FALSE(m.symmetric);

  const ChannelNoiseModel equal = noise_model_c(kind_c(1.3, 0.7, 0.7));
  EXPECT_EQ(equal.params.beta, 0.0);
  EXPECT_NEAR(equal.params.c, 2 * 1.3 * 1.3 / 0.7, 1e-14);

  EXPECT_NEAR(noise_model_c(kind_c(1, 1e6, 1)).params.beta, 1.0, 1e-2);
  EXPECT_LT(noise_model_c(kind_c(1, 1e6, 1)).params.beta, 1.0);
  EXPECT_LT(noise_model_c(kind_c(1, 1, 4)).params.beta, 0.0);
}

TEST(NoiseModelC, EqualCoefficientsMatchKindB)
{
  std::mt19937_64 rng(11);
  for (int i = 0; i < 20; ++i) {
    const double d = log_uniform(rng, 1e-6, 1e-2);
    const double D = log_uniform(rng, 1e-12, 1e-8);
    const ChannelNoiseModel b = noise_model_b(kind_b(d, D));
    const ChannelNoiseModel c = noise_model_c(kind_c(d, D, D));
    EXPECT_EQ(b.params.mu, c.params.mu);
    EXPECT_NEAR(b.params.c, c.params.c, 1e-15 * b.params.c);
    EXPECT_EQ(b.params.alpha, c.params.alpha);
    EXPECT_EQ(b.params.beta, c.params.beta);
    EXPECT_EQ(b.symmetric, c.symmetric);
    EXPECT_EQ(b.support, c.support);
  }
}

TEST(NoiseModel, ScaleDecreasesWithDiffusion)
{
  double prev_a = INFINITY, prev_b = INFINITY, prev_ca = INFINITY, prev_cb = INFINITY;
  for (double D = 0.1; D < 100; D *= 1.3) {
    const double a = noise_model(kind_a(1, D)).params.c;
    const double b = noise_model(kind_b(1, D)).params.c;
    const double ca = noise_model(kind_c(1, D, 2.0)).params.c;
    const double cb = noise_model(kind_c(1, 2.0, D)).params.c;
    EXPECT_LT(a, prev_a);
    EXPECT_LT(b, prev_b);
    EXPECT_LT(ca, prev_ca);
    EXPECT_LT(cb, prev_cb);
    prev_a = a, prev_b = b, prev_ca = ca, prev_cb = cb;
  }
}

TEST(NoiseModel, SkewStrictlyInsideUnitInterval)
{
  for (double ratio = 1e-10; ratio <= 1e10; ratio *= 10) {
    const double beta = noise_model_c(kind_c(1, ratio, 1)).params.beta;
    EXPECT_LT(std::abs(beta), 1.0) << ratio;
  }
}

TEST(CfComposition, Examples)
{
  const auto t = t_grid();
  EXPECT_LE(verify_cf_composition(kind_b(1, 1), t), 1e-13);
  EXPECT_LE(verify_cf_composition(kind_c(1, 3, 0.7), t), 1e-13);

  const ChannelConfig equal = kind_c(1, 0.9, 0.9);
  const LevyPair pair = levy_components(equal);
  for (double s : t) {
    const auto composed = stable::cf_stable(s, { 0, pair.leading, 0.5, 1 }) *
                          stable::cf_stable(-s, { 0, pair.trailing, 0.5, 1 });
    EXPECT_NEAR(composed.imag(), 0.0, 1e-15);
  }
  EXPECT_THROW(verify_cf_composition(kind_a(1, 1), t), DomainError);
}

TEST(CfComposition, RandomConfigurations)
{
  std::mt19937_64 rng(2024);
  const auto t = t_grid();
  for (int i = 0; i < 20; ++i) {
    const double d = log_uniform(rng, 0.1, 10);
    EXPECT_LE(verify_cf_composition(kind_b(d, log_uniform(rng, 0.01, 100)), t), 1e-12);
    EXPECT_LE(verify_cf_composition(
                kind_c(d, log_uniform(rng, 0.01, 100), log_uniform(rng, 0.01, 100)), t),
              1e-12);
  }
}

TEST(CfComposition, DetectsWrongSkewSign)
{
  // The composition check must notice a swapped release order.
  const ChannelConfig cfg = kind_c(1, 4, 1);
  const LevyPair pair = levy_components(cfg);
  const stable::StableParams flipped{ 0, noise_model_c(cfg).params.c, 0.5, -1.0 / 3.0 };
  double worst = 0.0;
  for (double s : t_grid()) {
    const auto composed = stable::cf_stable(s, { 0, pair.leading, 0.5, 1 }) *
                          stable::cf_stable(-s, { 0, pair.trailing, 0.5, 1 });
    worst = std::max(worst, std::abs(composed - stable::cf_stable(s, flipped)));
  }
  EXPECT_GT(worst, 1e-3);
}
