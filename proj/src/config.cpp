#include "fdnet/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

namespace fdnet::cli {

namespace {

template <typename Enum>
struct Name {
  Enum value;
  const char* text;
};

constexpr Name<Metric> kMetrics[] = {{Metric::outage_uplink, "outage-uplink"},
                                     {Metric::outage_downlink, "outage-downlink"},
                                     {Metric::sum_rate, "sum-rate"}};
constexpr Name<MethodChoice> kMethods[] = {{MethodChoice::analytic, "analytic"},
                                           {MethodChoice::montecarlo, "montecarlo"},
                                           {MethodChoice::asymptotic, "asymptotic"},
                                           {MethodChoice::both, "both"}};
constexpr Name<SweepVariable> kVariables[] = {{SweepVariable::none, "none"},
                                              {SweepVariable::rate, "R"},
                                              {SweepVariable::sigma_l2_db, "sigma_l2_db"},
                                              {SweepVariable::m, "m"},
                                              {SweepVariable::lambda, "lambda"}};
constexpr Name<Architecture> kArchs[] = {{Architecture::two_node, "two-node"},
                                         {Architecture::three_node, "three-node"}};
constexpr Name<NearestBsMode> kModes[] = {{NearestBsMode::beyond_nearest, "beyond-nearest"},
                                          {NearestBsMode::all_other, "all-other"}};
constexpr Name<OutputFormat> kFormats[] = {{OutputFormat::csv, "csv"}, {OutputFormat::json, "json"}};
constexpr Name<Command> kCommands[] = {
    {Command::eval, "eval"}, {Command::sweep, "sweep"}, {Command::validate, "validate"}};

template <typename Enum, std::size_t N>
std::string name_of(const Name<Enum> (&table)[N], Enum value) {
  for (const auto& n : table) {
    if (n.value == value) {
      return n.text;
    }
  }
  return "unknown";
}

template <typename Enum, std::size_t N>
Enum parse_name(const Name<Enum> (&table)[N], const std::string& text, const std::string& field) {
  for (const auto& n : table) {
    if (text == n.text) {
      return n.value;
    }
  }
  std::string allowed;
  for (const auto& n : table) {
    allowed += allowed.empty() ? "" : "|";
    allowed += n.text;
  }
  throw UsageError("--" + field + ": '" + text + "' is not one of " + allowed);
}

double parse_double(const std::string& text, const std::string& field) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw UsageError("--" + field + ": '" + text + "' is not a number");
  }
  if (used != text.size()) {
    throw UsageError("--" + field + ": '" + text + "' is not a number");
  }
  return v;
}

// dB value; "off" and "-inf" both mean a linear value of zero.
double parse_db(const std::string& text, const std::string& field) {
  if (text == "off") {
    return -std::numeric_limits<double>::infinity();
  }
  const double v = parse_double(text, field);
  if (std::isnan(v) || v == std::numeric_limits<double>::infinity()) {
    throw UsageError("--" + field + ": must be a finite dB value, -inf or off");
  }
  return v;
}

bool parse_switch(const std::string& text, const std::string& field) {
  if (text == "on") {
    return true;
  }
  if (text == "off") {
    return false;
  }
  throw UsageError("--" + field + ": expected on|off, got '" + text + "'");
}

std::vector<double> parse_list(const std::string& text, const std::string& field) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) {
      out.push_back(parse_double(item, field));
    }
  }
  return out;
}

std::vector<double> range_values(double from, double to, double step) {
  if (!(step > 0.0)) {
    throw UsageError("--step: must be > 0");
  }
  if (!(from <= to)) {
    throw UsageError("--from/--to: range is empty (from > to)");
  }
  const auto count = static_cast<std::size_t>(std::floor((to - from) / step + 1e-9)) + 1;
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(from + static_cast<double>(i) * step);
  }
  return out;
}

} // namespace

std::string to_string(Command c) {
  return name_of(kCommands, c);
}
std::string to_string(Metric m) {
  return name_of(kMetrics, m);
}
std::string to_string(MethodChoice m) {
  return name_of(kMethods, m);
}
std::string to_string(SweepVariable v) {
  return name_of(kVariables, v);
}

void validate_spec(const SweepSpec& spec) {
  try {
    spec.params.validate();
    spec.sim.validate();
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  if (!(spec.rate > 0.0) || !std::isfinite(spec.rate)) {
    throw UsageError("--rate: target rate must be > 0");
  }
  const bool two_node = spec.sim.architecture == Architecture::two_node;
  if (two_node && spec.method != MethodChoice::montecarlo) {
    throw UsageError("--method: the two-node architecture is simulation-only; use --method montecarlo");
  }
  if (spec.method == MethodChoice::asymptotic) {
    if (spec.metric == Metric::sum_rate) {
      throw UsageError("--method: asymptotic is defined for outage metrics only");
    }
    if (spec.metric == Metric::outage_uplink) {
      const auto& p = spec.params;
      if (p.alpha1 != 4.0 || p.alpha2 != 4.0) {
        throw UsageError("--alpha1/--alpha2: asymptotic uplink outage requires both exponents = 4");
      }
      if (p.p_b != p.p_u) {
        throw UsageError("--p-b/--p-u: asymptotic uplink outage requires equal powers");
      }
      if (p.sigma_n2 != 0.0) {
        throw UsageError("--sigma-n2-db: asymptotic uplink outage requires no noise (-inf)");
      }
    }
  }
  if (spec.command == Command::sweep) {
    if (spec.variable == SweepVariable::none) {
      throw UsageError("--sweep: the sweep command needs a swept variable");
    }
    if (spec.values.empty()) {
      throw UsageError("--values/--from/--to/--step: sweep range is empty");
    }
  } else if (spec.variable != SweepVariable::none) {
    throw UsageError("--sweep: swept variables are only accepted by the sweep command");
  }
  for (double v : spec.values) {
    switch (spec.variable) {
    case SweepVariable::rate:
      if (!(v > 0.0)) {
        throw UsageError("--values: swept R must be > 0");
      }
      break;
    case SweepVariable::m:
      if (v < 1.0 || v != std::floor(v)) {
        throw UsageError("--values: swept m must be a positive integer");
      }
      break;
    case SweepVariable::lambda:
      if (!(v > 0.0)) {
        throw UsageError("--values: swept lambda must be > 0");
      }
      break;
    case SweepVariable::sigma_l2_db:
      if (std::isnan(v) || v == std::numeric_limits<double>::infinity()) {
        throw UsageError("--values: swept sigma_l2_db must be finite or -inf");
      }
      break;
    case SweepVariable::none:
      break;
    }
  }
}

SweepSpec parse_config(const std::vector<std::string>& args) {
  CLI::App app{"Full-duplex cellular network outage and sum-rate evaluator"};
  app.set_config("--config", "", "key=value file; keys are the long option names");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(0, 1);
  app.set_help_all_flag("--help-all");

  std::string metric = "outage-uplink";
  std::string method = "analytic";
  std::string arch = "three-node";
  std::string suppression = "on";
  std::string mode = "beyond-nearest";
  std::string format = "csv";
  std::string sigma_n2_db = "-inf";
  std::string sigma_l2_db = "-30";
  std::string sweep = "none";
  std::string values;
  std::optional<double> from;
  std::optional<double> to;
  std::optional<double> step;
  std::optional<int> m;
  std::optional<int> m_b;
  std::optional<int> m_u;
  double gamma = 0.2;
  SweepSpec spec;
  auto& p = spec.params;

  app.add_option("--metric", metric, "outage-uplink|outage-downlink|sum-rate");
  app.add_option("--method", method, "analytic|montecarlo|asymptotic|both");
  app.add_option("--rate", spec.rate, "target rate R in bits per channel use");
  app.add_option("--lambda", p.lambda, "BS and user density");
  app.add_option("--m", m, "sector count at both BS and user");
  app.add_option("--m-b", m_b, "BS sector count (overrides --m)");
  app.add_option("--m-u", m_u, "user sector count (overrides --m)");
  app.add_option("--gamma", gamma, "side-lobe to main-lobe ratio");
  app.add_option("--alpha1", p.alpha1, "BS-user path-loss exponent (> 2)");
  app.add_option("--alpha2", p.alpha2, "BS-BS and user-user path-loss exponent (> 2)");
  app.add_option("--p-b", p.p_b, "BS transmit power, linear");
  app.add_option("--p-u", p.p_u, "user transmit power, linear");
  app.add_option("--sigma-n2-db", sigma_n2_db, "noise variance in dB, or -inf");
  app.add_option("--sigma-l2-db", sigma_l2_db, "residual loop-interference variance in dB, or off");
  app.add_option("--arch", arch, "two-node|three-node");
  app.add_option("--suppression", suppression, "passive loop-interference suppression on|off");
  app.add_option("--nearest-bs-mode", mode, "beyond-nearest|all-other");
  app.add_option("--trials", spec.sim.trials, "Monte Carlo trials per point");
  app.add_option("--seed", spec.sim.seed, "Monte Carlo seed");
  app.add_option("--threads", spec.sim.threads, "worker threads (0: all cores)");
  app.add_option("--sweep", sweep, "swept variable R|sigma_l2_db|m|lambda");
  app.add_option("--values", values, "comma-separated sweep values");
  app.add_option("--from", from, "sweep start");
  app.add_option("--to", to, "sweep end (inclusive)");
  app.add_option("--step", step, "sweep step");
  app.add_option("--output", spec.output, "output file (default: standard output)");
  app.add_option("--format", format, "csv|json");

  auto* eval = app.add_subcommand("eval", "evaluate a single point");
  auto* sweep_cmd = app.add_subcommand("sweep", "evaluate a range of one variable");
  auto* validate = app.add_subcommand("validate", "cross-check the analytic and Monte Carlo engines");
  for (auto* sub : {eval, sweep_cmd, validate}) {
    sub->fallthrough();
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::CallForAllHelp&) {
    throw HelpRequested(app.help("", CLI::AppFormatMode::All));
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  if (sweep_cmd->parsed()) {
    spec.command = Command::sweep;
  } else if (validate->parsed()) {
    spec.command = Command::validate;
  }

  spec.metric = parse_name(kMetrics, metric, "metric");
  spec.method = parse_name(kMethods, method, "method");
  spec.sim.architecture = parse_name(kArchs, arch, "arch");
  spec.sim.suppression = parse_switch(suppression, "suppression");
  spec.sim.nearest_bs_mode = parse_name(kModes, mode, "nearest-bs-mode");
  spec.format = parse_name(kFormats, format, "format");
  spec.variable = parse_name(kVariables, sweep, "sweep");

  spec.sigma_n2_db = parse_db(sigma_n2_db, "sigma-n2-db");
  spec.sigma_l2_db = parse_db(sigma_l2_db, "sigma-l2-db");
  p.sigma_n2 = db_to_linear(spec.sigma_n2_db);
  p.sigma_l2 = db_to_linear(spec.sigma_l2_db);

  if (m) {
    p.m_b = p.m_u = *m;
  }
  if (m_b) {
    p.m_b = *m_b;
  }
  if (m_u) {
    p.m_u = *m_u;
  }
  p.gamma_b = p.gamma_u = gamma;

  const bool has_range = from || to || step;
  if (!values.empty() && has_range) {
    throw UsageError("--values: give either a value list or --from/--to/--step, not both");
  }
  if (!values.empty()) {
    spec.values = parse_list(values, "values");
  } else if (has_range) {
    if (!(from && to && step)) {
      throw UsageError("--from/--to/--step: all three are required for a range");
    }
    spec.values = range_values(*from, *to, *step);
  }

  validate_spec(spec);
  return spec;
}

std::string to_config_text(const SweepSpec& spec) {
  const auto& p = spec.params;
  std::ostringstream out;
  out << "metric = " << to_string(spec.metric) << '\n'
      << "method = " << to_string(spec.method) << '\n'
      << "rate = " << format_number(spec.rate) << '\n'
      << "lambda = " << format_number(p.lambda) << '\n'
      << "m-b = " << p.m_b << '\n'
      << "m-u = " << p.m_u << '\n'
      << "gamma = " << format_number(p.gamma_b) << '\n'
      << "alpha1 = " << format_number(p.alpha1) << '\n'
      << "alpha2 = " << format_number(p.alpha2) << '\n'
      << "p-b = " << format_number(p.p_b) << '\n'
      << "p-u = " << format_number(p.p_u) << '\n'
      << "sigma-n2-db = " << format_number(spec.sigma_n2_db) << '\n'
      << "sigma-l2-db = " << format_number(spec.sigma_l2_db) << '\n'
      << "arch = " << to_string(spec.sim.architecture) << '\n'
      << "suppression = " << (spec.sim.suppression ? "on" : "off") << '\n'
      << "nearest-bs-mode = " << to_string(spec.sim.nearest_bs_mode) << '\n'
      << "trials = " << spec.sim.trials << '\n'
      << "seed = " << spec.sim.seed << '\n'
      << "threads = " << spec.sim.threads << '\n'
      << "format = " << name_of(kFormats, spec.format) << '\n';
  if (spec.variable != SweepVariable::none) {
    out << "sweep = " << to_string(spec.variable) << '\n';
  }
  if (!spec.values.empty()) {
    std::string list;
    for (double v : spec.values) {
      list += list.empty() ? "" : ",";
      list += format_number(v);
    }
    out << "values = \"" << list << "\"\n";
  }
  if (!spec.output.empty()) {
    out << "output = \"" << spec.output << "\"\n";
  }
  return out.str();
}

} // namespace fdnet::cli
