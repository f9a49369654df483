#pragma once

#include "molcom/channels.hpp"
#include "molcom/stable.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

//! Seeded Monte Carlo draws of the channel noise terms and goodness-of-fit
//! tests of the analytic laws.
//!
//! Draw i of a batch is a pure function of (seed, i), computed from one
//! Philox4x32-10 block, so batches are bit-identical for any thread count.
namespace molcom::sim {

inline constexpr std::uint64_t default_seed = 20120601;

struct SampleBatch
{
  std::vector<double> values;
  std::uint64_t seed = default_seed;
  std::size_t count = 0;
  channels::ChannelNoiseModel model;
  //! Set when values are |offset + noise| rather than the noise itself.
  std::optional<double> folded_offset;
};

struct GofReport
{
  double ks_statistic = 0.0;
  std::size_t sample_count = 0;
  double threshold = 0.0;
  bool pass = false;
};

//! mu + c / G^2 with G standard normal. Throws DomainError for c <= 0 or n = 0.
SampleBatch sample_levy(double mu, double c, std::size_t n, std::uint64_t seed,
                        unsigned threads = 0);

//! Channel noise built from hitting times: kind A draws one Levy time, kinds
//! B and C draw T(leading) - T(trailing) from two independent Levy times.
SampleBatch sample_channel(const channels::ChannelConfig& cfg, std::size_t n,
                           std::uint64_t seed, unsigned threads = 0);

//! Chambers-Mallows-Stuck draws from S(mu, c, alpha, beta), any valid
//! parameters with c > 0.
SampleBatch sample_stable(const stable::StableParams& params, std::size_t n,
                          std::uint64_t seed, unsigned threads = 0);

//! 1.63 / sqrt(n): asymptotic 1% critical value of the one-sample statistic.
double ks_threshold(std::size_t n);

//! 1.63 sqrt((n + m) / (n m)): the same level for two samples.
double ks_threshold(std::size_t n, std::size_t m);

//! One-sample two-sided KS statistic of values against cdf(., params).
GofReport ks_test(std::span<const double> values, const stable::StableParams& params,
                  std::optional<double> threshold = {});

GofReport ks_test(const SampleBatch& batch, const channels::ChannelNoiseModel& model,
                  std::optional<double> threshold = {});

//! Two-sample KS statistic. sample_count is n + m.
GofReport ks_two_sample(std::span<const double> a, std::span<const double> b,
                        std::optional<double> threshold = {});

//! |l_x + value| for each draw of a symmetric (kind B) noise batch.
SampleBatch fold_observable_b(double l_x, const SampleBatch& batch);

} // namespace molcom::sim
