#include "molcom/channels.hpp"

#include "molcom/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace molcom::channels {

namespace {

double
require_positive(const std::optional<double>& value, const char* name)
{
  if (!value)
    throw DomainError(std::string("channel configuration is missing ") + name);
  if (!(*value > 0.0) || !std::isfinite(*value))
    throw DomainError(std::string(name) + " must be positive and finite");
  return *value;
}

double
scale_factor(const ChannelConfig& cfg)
{
  return cfg.scale3d ? require_positive(cfg.scale3d, "scale3d") : 1.0;
}

double
hitting_scale(const ChannelConfig& cfg, double diffusion)
{
  return scale_factor(cfg) * cfg.d * cfg.d / (2.0 * diffusion);
}

void
require_kind(const ChannelConfig& cfg, ChannelKind kind)
{
  cfg.validate();
  if (cfg.kind != kind)
    throw DomainError("channel kind " + to_string(cfg.kind) + " passed where kind " +
                      to_string(kind) + " is required");
}

} // namespace

std::string
to_string(ChannelKind kind)
{
  switch (kind) {
    case ChannelKind::A:
      return "A";
    case ChannelKind::B:
      return "B";
    case ChannelKind::C:
      return "C";
  }
  return "?";
}

ChannelKind
parse_channel_kind(std::string_view text)
{
  if (text.size() == 1) {
    switch (std::toupper(static_cast<unsigned char>(text[0]))) {
      case 'A':
        return ChannelKind::A;
      case 'B':
        return ChannelKind::B;
      case 'C':
        return ChannelKind::C;
    }
  }
  throw DomainError("unknown channel kind '" + std::string(text) + "' (expected A, B or C)");
}

std::string
to_string(Support support)
{
  return support == Support::nonnegative ? "nonnegative" : "full_line";
}

void
ChannelConfig::validate() const
{
  if (!(d > 0.0) || !std::isfinite(d))
    throw DomainError("distance d must be positive and finite");
  if (kind == ChannelKind::C) {
    require_positive(Da, "Da");
    require_positive(Db, "Db");
  } else {
    require_positive(D, "D");
  }
  if (scale3d)
    require_positive(scale3d, "scale3d");
}

ChannelNoiseModel
make_noise_model(const stable::StableParams& params)
{
  params.validate();
  ChannelNoiseModel model;
  model.params = params;
  model.symmetric = params.beta == 0.0;
  const bool levy = params.alpha == 0.5 && params.beta == 1.0 && params.mu == 0.0;
  model.support = levy ? Support::nonnegative : Support::full_line;
  return model;
}

ChannelNoiseModel
noise_model_a(const ChannelConfig& cfg)
{
  require_kind(cfg, ChannelKind::A);
  return make_noise_model({ 0.0, hitting_scale(cfg, *cfg.D), 0.5, 1.0 });
}

ChannelNoiseModel
noise_model_b(const ChannelConfig& cfg)
{
  require_kind(cfg, ChannelKind::B);
  const double c = scale_factor(cfg) * 2.0 * cfg.d * cfg.d / *cfg.D;
  return make_noise_model({ 0.0, c, 0.5, 0.0 });
}

ChannelNoiseModel
noise_model_c(const ChannelConfig& cfg)
{
  require_kind(cfg, ChannelKind::C);
  const double ra = std::sqrt(*cfg.Da);
  const double rb = std::sqrt(*cfg.Db);
  const double c =
    scale_factor(cfg) * cfg.d * cfg.d * (ra + rb) * (ra + rb) / (2.0 * *cfg.Da * *cfg.Db);
  const double beta = (ra - rb) / (ra + rb);
  return make_noise_model({ 0.0, c, 0.5, beta });
}

ChannelNoiseModel
noise_model(const ChannelConfig& cfg)
{
  switch (cfg.kind) {
    case ChannelKind::A:
      return noise_model_a(cfg);
    case ChannelKind::B:
      return noise_model_b(cfg);
    case ChannelKind::C:
      return noise_model_c(cfg);
  }
  throw DomainError("unknown channel kind");
}

LevyPair
levy_components(const ChannelConfig& cfg)
{
  cfg.validate();
  switch (cfg.kind) {
    case ChannelKind::B: {
      const double c = hitting_scale(cfg, *cfg.D);
      return { c, c };
    }
    case ChannelKind::C:
      return { hitting_scale(cfg, *cfg.Db), hitting_scale(cfg, *cfg.Da) };
    case ChannelKind::A:
      break;
  }
  throw DomainError("kind A noise is a single hitting time, not a difference");
}

double
verify_cf_composition(const ChannelConfig& cfg, std::span<const double> t_grid)
{
  const LevyPair pair = levy_components(cfg);
  const ChannelNoiseModel model = noise_model(cfg);
  const stable::StableParams lead{ 0.0, pair.leading, 0.5, 1.0 };
  const stable::StableParams trail{ 0.0, pair.trailing, 0.5, 1.0 };
  double worst = 0.0;
  for (double t : t_grid) {
    const auto composed = stable::cf_stable(t, lead) * stable::cf_stable(-t, trail);
    worst = std::max(worst, std::abs(composed - stable::cf_stable(t, model.params)));
  }
  return worst;
}

} // namespace molcom::channels
