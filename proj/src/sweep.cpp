#include "fdnet/cli.hpp"

#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <ostream>

namespace fdnet::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

ResultRow base_row(const SweepSpec& point, SweepVariable var, double swept_value, Method method,
                   const std::string& link) {
  ResultRow row;
  row.arch = point.sim.architecture;
  row.link = link;
  row.metric = point.metric;
  row.method = method;
  row.swept_var = var;
  row.swept_value = swept_value;
  row.rate = point.rate;
  row.params = point.params;
  row.sigma_n2_db = point.sigma_n2_db;
  row.sigma_l2_db = point.sigma_l2_db;
  row.suppression = point.sim.suppression;
  row.nearest_bs_mode = point.sim.nearest_bs_mode;
  if (method == Method::montecarlo) {
    row.trials = point.sim.trials;
    row.seed = point.sim.seed;
  }
  return row;
}

void fill(ResultRow& row, const MetricEstimate& e) {
  row.value = e.value;
  row.uncertainty = e.uncertainty;
}

void mark_error(ResultRow& row, const std::exception& e) {
  row.value = kNaN;
  row.uncertainty = kNaN;
  row.error = e.what();
}

Link link_of(Metric metric) {
  return metric == Metric::outage_downlink ? Link::downlink : Link::uplink;
}

std::vector<Method> methods_of(MethodChoice choice) {
  switch (choice) {
  case MethodChoice::analytic:
    return {Method::analytic};
  case MethodChoice::montecarlo:
    return {Method::montecarlo};
  case MethodChoice::asymptotic:
    return {Method::asymptotic};
  case MethodChoice::both:
    return {Method::analytic, Method::montecarlo};
  }
  return {};
}

// SINR samples do not depend on the target rate, so a rate sweep simulates
// each link once and thresholds the same samples at every point.
class SampleCache {
public:
  explicit SampleCache(bool enabled) : enabled_(enabled) {}

  MetricEstimate outage(Link link, double rate, const NetworkParams& params, const SimConfig& sim) {
    if (!enabled_) {
      return estimate_outage(link, rate, params, sim);
    }
    auto it = samples_.find(link);
    if (it == samples_.end()) {
      it = samples_.emplace(link, simulate_sinr(link, params, sim)).first;
    }
    return outage_from_samples(it->second, rate);
  }

private:
  bool enabled_;
  std::map<Link, std::vector<double>> samples_;
};

void outage_rows(const SweepSpec& point, SweepVariable var, double x, Method method, SampleCache& cache,
                 std::vector<ResultRow>& rows) {
  const Link link = link_of(point.metric);
  ResultRow row = base_row(point, var, x, method, to_string(link));
  try {
    switch (method) {
    case Method::analytic: {
      OutageQuery q;
      q.rate = point.rate;
      q.params = point.params;
      q.suppression = point.sim.suppression;
      q.link = link;
      fill(row, outage(q));
      break;
    }
    case Method::asymptotic:
      if (link == Link::uplink) {
        fill(row, asymptotic_outage_uplink(point.rate, point.params));
      } else {
        row.value = asymptotic_outage_downlink(point.rate, point.params.gamma_u);
      }
      break;
    case Method::montecarlo:
      fill(row, cache.outage(link, point.rate, point.params, point.sim));
      break;
    }
  } catch (const std::exception& e) {
    mark_error(row, e);
  }
  rows.push_back(std::move(row));
}

void sum_rate_rows(const SweepSpec& point, SweepVariable var, double x, Method method,
                   std::vector<ResultRow>& rows) {
  ResultRow up = base_row(point, var, x, method, "uplink");
  ResultRow down = base_row(point, var, x, method, "downlink");
  ResultRow total = base_row(point, var, x, method, "sum");
  try {
    const SumRate r = method == Method::montecarlo ? estimate_sum_rate(point.params, point.sim)
                                                   : sum_rate(point.params, point.sim.suppression);
    fill(up, r.uplink);
    fill(down, r.downlink);
    fill(total, r.total);
  } catch (const std::exception& e) {
    for (auto* row : {&up, &down, &total}) {
      mark_error(*row, e);
    }
  }
  rows.push_back(std::move(up));
  rows.push_back(std::move(down));
  rows.push_back(std::move(total));
}

} // namespace

SweepSpec point_spec(const SweepSpec& spec, double value) {
  SweepSpec point = spec;
  switch (spec.variable) {
  case SweepVariable::rate:
    point.rate = value;
    break;
  case SweepVariable::sigma_l2_db:
    point.sigma_l2_db = value;
    point.params.sigma_l2 = db_to_linear(value);
    break;
  case SweepVariable::m:
    point.params.m_b = point.params.m_u = static_cast<int>(value);
    break;
  case SweepVariable::lambda:
    point.params.lambda = value;
    break;
  case SweepVariable::none:
    break;
  }
  return point;
}

std::vector<ResultRow> run_sweep(const SweepSpec& spec) {
  std::vector<double> xs = spec.values;
  if (spec.variable == SweepVariable::none || xs.empty()) {
    xs = {kNaN};
  }
  std::vector<ResultRow> rows;
  const auto methods = methods_of(spec.method);
  SampleCache cache(spec.variable == SweepVariable::rate);
  for (double x : xs) {
    const SweepSpec point = std::isnan(x) ? spec : point_spec(spec, x);
    for (Method method : methods) {
      if (spec.metric == Metric::sum_rate) {
        sum_rate_rows(point, spec.variable, x, method, rows);
      } else {
        outage_rows(point, spec.variable, x, method, cache, rows);
      }
    }
  }
  return rows;
}

std::vector<ValidationCheck> run_validation(const SweepSpec& spec, std::ostream* progress) {
  constexpr int kSectors[] = {1, 2, 4, 8};
  constexpr double kSigmaDb[] = {-std::numeric_limits<double>::infinity(), -30.0, -20.0, -10.0};
  constexpr double kRates[] = {0.01, 0.1, 1.0};

  SweepSpec base = spec;
  base.sim.architecture = Architecture::three_node;
  base.method = MethodChoice::both;

  std::vector<ValidationCheck> checks;
  for (int m : kSectors) {
    for (double sigma_db : kSigmaDb) {
      for (Metric metric : {Metric::outage_uplink, Metric::outage_downlink}) {
        SweepSpec point = base;
        point.metric = metric;
        point.params.m_b = point.params.m_u = m;
        point.sigma_l2_db = sigma_db;
        point.params.sigma_l2 = db_to_linear(sigma_db);
        point.variable = SweepVariable::rate;
        point.values.assign(std::begin(kRates), std::end(kRates));

        const auto rows = run_sweep(point);
        for (std::size_t i = 0; i + 1 < rows.size(); i += 2) {
          ValidationCheck c;
          c.analytic = rows[i];
          c.montecarlo = rows[i + 1];
          c.tolerance = std::max(3.0 * c.montecarlo.uncertainty, 0.01);
          c.pass = c.analytic.error.empty() && c.montecarlo.error.empty() &&
                   std::abs(c.analytic.value - c.montecarlo.value) <= c.tolerance;
          if (progress) {
            *progress << (c.pass ? "PASS" : "FAIL") << ' ' << c.analytic.link << " m=" << m
                      << " sigma_l2_db=" << format_number(sigma_db) << " R=" << format_number(c.analytic.rate)
                      << " analytic=" << format_number(c.analytic.value)
                      << " montecarlo=" << format_number(c.montecarlo.value)
                      << " tol=" << format_number(c.tolerance) << '\n';
          }
          checks.push_back(std::move(c));
        }
      }
    }
  }
  return checks;
}

} // namespace fdnet::cli
