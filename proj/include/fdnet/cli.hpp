#pragma once

#include "fdnet/analytic.hpp"
#include "fdnet/model.hpp"
#include "fdnet/montecarlo.hpp"

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace fdnet::cli {

// Bad command line or configuration file. The message names the field.
class UsageError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// --help was given; what() holds the help text.
class HelpRequested : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class Command { eval, sweep, validate };
enum class Metric { outage_uplink, outage_downlink, sum_rate };
enum class MethodChoice { analytic, montecarlo, asymptotic, both };
enum class SweepVariable { none, rate, sigma_l2_db, m, lambda };
enum class OutputFormat { csv, json };

std::string to_string(Command c);
std::string to_string(Metric m);
std::string to_string(MethodChoice m);
std::string to_string(SweepVariable v);

struct SweepSpec {
  Command command = Command::eval;
  Metric metric = Metric::outage_uplink;
  MethodChoice method = MethodChoice::analytic;
  SweepVariable variable = SweepVariable::none;
  std::vector<double> values;
  double rate = 0.1;
  // The dB values given on the command line are kept verbatim so that the
  // configuration echo reads back bit-identically; params holds them linear.
  double sigma_n2_db = -std::numeric_limits<double>::infinity();
  double sigma_l2_db = -30.0;
  NetworkParams params;
  SimConfig sim;
  std::string output; // empty: standard output
  OutputFormat format = OutputFormat::csv;

  bool operator==(const SweepSpec&) const = default;
};

// Parses arguments (without the program name). The first argument may be a
// subcommand: eval (default), sweep or validate. `--config <path>` reads
// key=value lines whose keys are the long option names.
SweepSpec parse_config(const std::vector<std::string>& args);

// key=value text that parse_config reads back into an equal SweepSpec.
std::string to_config_text(const SweepSpec& spec);

// Throws UsageError for domain violations and unsupported combinations.
void validate_spec(const SweepSpec& spec);

struct ResultRow {
  Architecture arch = Architecture::three_node;
  std::string link; // uplink, downlink or sum
  Metric metric = Metric::outage_uplink;
  Method method = Method::analytic;
  SweepVariable swept_var = SweepVariable::none;
  double swept_value = 0.0;
  double rate = 0.0;
  NetworkParams params;
  double sigma_n2_db = 0.0;
  double sigma_l2_db = 0.0;
  bool suppression = true;
  NearestBsMode nearest_bs_mode = NearestBsMode::beyond_nearest;
  double value = 0.0;
  double uncertainty = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::string error; // non-empty marks a failed row; value is NaN then
};

// Parameters of one sweep point.
SweepSpec point_spec(const SweepSpec& spec, double value);

// Rows for every sweep point and method. Engine failures become error rows.
std::vector<ResultRow> run_sweep(const SweepSpec& spec);

struct ValidationCheck {
  ResultRow analytic;
  ResultRow montecarlo;
  double tolerance = 0.0;
  bool pass = false;
};

// Analytic vs Monte Carlo over m in {1,2,4,8}, sigma_l2 in {off, -30, -20,
// -10} dB and R in {0.01, 0.1, 1}, three-node uplink and downlink, on top of
// spec.params and spec.sim. Agreement means |a - mc| <= max(3 stderr, 0.01).
std::vector<ValidationCheck> run_validation(const SweepSpec& spec, std::ostream* progress = nullptr);

// Shortest representation that reads back to the same double; inf, -inf, nan
// for non-finite values.
std::string format_number(double v);

inline const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols{
      "arch",     "link",      "metric",      "method",      "swept_var",   "swept_value",
      "R",        "lambda",    "m_b",         "m_u",         "gamma",       "alpha1",
      "alpha2",   "p_b",       "p_u",         "sigma_n2_db", "sigma_l2_db", "suppression",
      "nearest_bs_mode",       "value",       "uncertainty", "trials",      "seed"};
  return cols;
}

void emit(const std::vector<ResultRow>& rows, OutputFormat format, std::ostream& out);

// Writes to `destination`, or to standard output when it is empty.
void emit(const std::vector<ResultRow>& rows, OutputFormat format, const std::string& destination);

} // namespace fdnet::cli
