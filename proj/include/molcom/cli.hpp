#pragma once

#include "molcom/channels.hpp"
#include "molcom/sim.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

//! Command-line front end: density and tail tables, channel queries, Monte
//! Carlo draws and the validation suites.
namespace molcom::cli {

enum class Command
{
  pdf,
  cdf,
  tail,
  sample,
  validate,
  figures
};

enum class Format
{
  csv,
  json
};

std::string to_string(Command command);
std::string to_string(Format format);

//! Bad flags, bad config file contents or an unusable output path. Exit 2.
class UsageError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct Grid
{
  double min = -10.0;
  double max = 10.0;
  std::size_t points = 401;

  //! Points evenly spaced in x, or in log10(x) when log_spaced.
  std::vector<double> abscissae(bool log_spaced) const;
};

struct RunConfig
{
  Command command = Command::figures;
  std::optional<channels::ChannelConfig> channel;
  std::vector<double> beta_list;
  Grid grid;
  //! Abscissae of the tail table written by the figures command.
  Grid tail_grid{ 1.0, 1e4, 81 };
  std::uint64_t seed = sim::default_seed;
  std::size_t n_samples = 1000000;
  //! File for single-table commands, directory for figures; "-" is stdout.
  std::string output_path = "-";
  Format format = Format::csv;
  std::optional<double> ks_threshold;
  //! 0 picks the hardware concurrency. Never changes any output.
  unsigned threads = 0;
  //! Multiplies the scale of every analytic law under test in validate.
  //! Anything but 1 is a deliberately broken model.
  double fault_scale = 1.0;

  //! Throws UsageError naming the offending field.
  void validate() const;

  //! beta_list, or the command's default when it is empty.
  std::vector<double> betas() const;
};

//! Parses flags and the optional --config file (key = value lines, one key
//! per flag name, flags win). Throws UsageError; --help throws HelpRequested.
RunConfig parse_args(int argc, const char* const* argv);

class HelpRequested : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

using Cell = std::variant<double, std::int64_t, std::string>;

struct Table
{
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  nlohmann::ordered_json metadata;
};

//! Header row plus one line per row; numbers use 17 significant digits in
//! the C locale whatever the global locale is.
std::string to_csv(const Table& table);

//! {"metadata": ..., "columns": [...], "rows": [{column: value}, ...]}.
//! Non-finite numbers become null.
std::string to_json(const Table& table);

std::string format_number(double v);

//! Standardized alpha = 1/2 pdf or cdf for each beta, or tail probabilities
//! with their asymptotic approximation. Command must be pdf, cdf or tail.
Table cmd_density(const RunConfig& cfg);

//! Stable parameters, symmetry and support of the configured channel noise
//! plus the requested pdf, cdf or tail values at the grid times (seconds)
//! and the characteristic function modulus with the grid read as angular
//! frequency.
Table cmd_channel_query(const RunConfig& cfg);

//! Channel noise draws; the KS report against the channel law goes in the
//! metadata.
Table cmd_sample(const RunConfig& cfg);

//! Standardized pdf and cdf for each beta plus the standard normal, and the
//! tail table with exact, stable-approximation and Gaussian columns.
std::vector<Table> cmd_figures(const RunConfig& cfg);

struct ValidationReport
{
  Table table;
  bool pass = false;
};

//! Runs every suite; each row is one invariant with its measured value,
//! tolerance and verdict.
ValidationReport cmd_validate(const RunConfig& cfg);

//! Whole program: parse, run, write. Returns the process exit code
//! (0 ok, 1 validation failure, 2 usage or config error, 3 non-convergence).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace molcom::cli
