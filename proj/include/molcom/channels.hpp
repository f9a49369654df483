#pragma once

#include "molcom/stable.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>

//! Timing-channel noise laws for diffusion-based molecular communication.
//!
//!   A: T_n ~ Levy(0, d^2 / (2D))                       absolute release time
//!   B: L_n = T_2 - T_1 ~ S(0, 2d^2 / D, 1/2, 0)         two releases, one type
//!   C: Z_n = T_b - T_a ~ S(0, c, 1/2, beta)             two types, a released first
//!      c = d^2 (sqrt(Da) + sqrt(Db))^2 / (2 Da Db)
//!      beta = (sqrt(Da) - sqrt(Db)) / (sqrt(Da) + sqrt(Db))
namespace molcom::channels {

enum class ChannelKind
{
  A,
  B,
  C
};

std::string to_string(ChannelKind kind);
//! Accepts "A", "B", "C" (case-insensitive); throws DomainError otherwise.
ChannelKind parse_channel_kind(std::string_view text);

struct ChannelConfig
{
  ChannelKind kind = ChannelKind::A;
  double d = 1.0;                 // transmitter-receiver distance [m]
  std::optional<double> D;        // diffusion coefficient for A and B [m^2/s]
  std::optional<double> Da;       // diffusion coefficient of type a for C
  std::optional<double> Db;       // diffusion coefficient of type b for C
  std::optional<double> scale3d;  // user-supplied multiplier on every Levy scale

  //! Throws DomainError unless d > 0 and the coefficients the kind needs are
  //! present, finite and positive.
  void validate() const;
};

enum class Support
{
  nonnegative,
  full_line
};

std::string to_string(Support support);

struct ChannelNoiseModel
{
  stable::StableParams params;
  bool symmetric = false;
  Support support = Support::full_line;
};

//! Builds the model for a parameter set, deriving the flags from it.
ChannelNoiseModel make_noise_model(const stable::StableParams& params);

ChannelNoiseModel noise_model_a(const ChannelConfig& cfg);
ChannelNoiseModel noise_model_b(const ChannelConfig& cfg);
ChannelNoiseModel noise_model_c(const ChannelConfig& cfg);
//! Dispatches on cfg.kind.
ChannelNoiseModel noise_model(const ChannelConfig& cfg);

//! Scales of the two independent Levy(0, c) hitting times whose difference
//! T(leading) - T(trailing) is the noise of a kind B or C channel.
struct LevyPair
{
  double leading = 0.0;  // B: T_2, C: T_b
  double trailing = 0.0; // B: T_1, C: T_a
};

LevyPair levy_components(const ChannelConfig& cfg);

//! max over t of |phi_lead(t) phi_trail(-t) - phi_model(t)|, i.e. the
//! composition of the two hitting-time laws checked against the closed-form
//! parameters. Requires kind B or C.
double verify_cf_composition(const ChannelConfig& cfg, std::span<const double> t_grid);

} // namespace molcom::channels
