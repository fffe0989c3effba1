#include "fdnet/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fdnet {

namespace {

constexpr double pi = std::numbers::pi;

struct Exponent {
  double value = 0.0;
  double error = 0.0;
};

// Sum over the thinning cases of
//   2 pi lambda_k  int_lower^inf  a_k / (a_k + x^alpha / r^alpha_link)  x dx,
// with a_k = power_ratio * (gain_k / reference_gain) * T. The integrand is
// rewritten as x / (1 + (x / l_k)^alpha) with l_k = (a_k r^alpha_link)^(1/alpha).
Exponent pgfl_exponent(const ThinningTable& table, double power_ratio, double reference_gain,
                       double threshold, double r, double alpha_link, double alpha, double lower,
                       const QuadratureSpec& spec) {
  Exponent total;
  for (const auto& c : table.cases) {
    const double a = power_ratio * (c.gain / reference_gain) * threshold;
    if (c.density == 0.0 || a == 0.0) {
      continue;
    }
    const double length = std::exp((std::log(a) + alpha_link * std::log(r)) / alpha);
    const auto kernel = [length, alpha](double x) {
      return x / (1.0 + std::pow(x / length, alpha));
    };
    const auto inner = integrate_semi_infinite(kernel, lower, spec.with_scale(std::max(length, lower)));
    total.value += 2.0 * pi * c.density * inner.value;
    total.error += 2.0 * pi * c.density * inner.error;
  }
  return total;
}

void check_point(double r, double threshold) {
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw DomainError("distance r must be > 0");
  }
  if (!(threshold >= 0.0) || !std::isfinite(threshold)) {
    throw DomainError("threshold T must be >= 0");
  }
}

double desired_gain(const NetworkParams& params) {
  return antenna_for(params, Node::bs).g * antenna_for(params, Node::user).g;
}

// Coverage integrals over r share the nearest-neighbour weight and scale.
QuadratureSpec radial_spec(const NetworkParams& params, const QuadratureSpec& spec) {
  return spec.with_scale(1.0 / std::sqrt(pi * params.lambda));
}

void check_rate(double rate) {
  if (!(rate >= 0.0) || !std::isfinite(rate)) {
    throw DomainError("rate must be >= 0");
  }
}

MetricEstimate from_coverage(const QuadratureResult& coverage, const OutageQuery& query) {
  MetricEstimate m;
  m.method = Method::analytic;
  m.value = std::clamp(1.0 - coverage.value, 0.0, 1.0);
  m.uncertainty = coverage.error;
  m.metadata["rate"] = query.rate;
  m.metadata["threshold"] = rate_to_threshold(query.rate);
  m.metadata["suppression"] = query.suppression ? 1.0 : 0.0;
  return m;
}

} // namespace

std::string to_string(Link link) {
  return link == Link::uplink ? "uplink" : "downlink";
}

std::string to_string(Method method) {
  switch (method) {
  case Method::analytic:
    return "analytic";
  case Method::asymptotic:
    return "asymptotic";
  case Method::montecarlo:
    return "montecarlo";
  }
  return "unknown";
}

void OutageQuery::validate() const {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw DomainError("target rate R must be > 0");
  }
  params.validate();
}

double laplace_li_uplink(double r, double threshold, const NetworkParams& params, bool suppression) {
  check_point(r, threshold);
  const auto bs = antenna_for(params, Node::bs);
  const auto user = antenna_for(params, Node::user);
  const double base = params.mu * params.sigma_l2 * threshold * std::pow(r, params.alpha1) *
                      params.p_b / (params.p_u * user.g);

  const auto angles = li_angle_model(params.m_b);
  double sum = 0.0;
  for (double theta : angles.grid) {
    if (theta == 0.0) {
      sum += 1.0 / (1.0 + bs.g * base);
    } else {
      const double surviving = suppression ? passive_suppression_fraction(theta) : 1.0;
      sum += 1.0 / (1.0 + bs.h * base * surviving);
    }
  }
  return sum * angles.probability;
}

QuadratureResult laplace_ib_uplink(double r, double threshold, const NetworkParams& params,
                                   const QuadratureSpec& spec) {
  check_point(r, threshold);
  const auto table = thinning_table(params, Node::bs, Node::bs);
  const double ratio = params.p_b / params.p_u;
  const double reference = desired_gain(params);
  const double lambda = params.lambda;
  const QuadratureSpec inner = spec.tightened();

  const auto integrand = [&](double rho) {
    const double weight = rho * std::exp(-lambda * pi * rho * rho);
    if (weight == 0.0) {
      return 0.0;
    }
    const auto e = pgfl_exponent(table, ratio, reference, threshold, r, params.alpha1,
                                 params.alpha2, rho, inner);
    return weight * std::exp(-e.value);
  };
  return integrate_semi_infinite(integrand, 0.0, radial_spec(params, spec));
}

QuadratureResult laplace_iu_uplink(double r, double threshold, const NetworkParams& params,
                                   const QuadratureSpec& spec) {
  check_point(r, threshold);
  const auto table = thinning_table(params, Node::bs, Node::user);
  const auto e = pgfl_exponent(table, 1.0, desired_gain(params), threshold, r, params.alpha1,
                               params.alpha1, r, spec);
  const double value = std::exp(-e.value);
  return {value, value * e.error};
}

QuadratureResult laplace_ib_downlink(double r, double threshold, const NetworkParams& params,
                                     const QuadratureSpec& spec) {
  check_point(r, threshold);
  const auto table = thinning_table(params, Node::user, Node::bs);
  const auto e = pgfl_exponent(table, 1.0, desired_gain(params), threshold, r, params.alpha1,
                               params.alpha1, r, spec);
  const double value = std::exp(-e.value);
  return {value, value * e.error};
}

QuadratureResult laplace_iu_downlink(double r, double threshold, const NetworkParams& params,
                                     const QuadratureSpec& spec) {
  check_point(r, threshold);
  const auto table = thinning_table(params, Node::user, Node::user);
  const auto e = pgfl_exponent(table, params.p_u / params.p_b, desired_gain(params), threshold, r,
                               params.alpha1, params.alpha2, 0.0, spec);
  const double value = std::exp(-e.value);
  return {value, value * e.error};
}

QuadratureResult coverage_uplink(double rate, const NetworkParams& params, bool suppression,
                                 const QuadratureSpec& spec) {
  check_rate(rate);
  params.validate();
  const double threshold = rate_to_threshold(rate);
  const double lambda = params.lambda;
  const double s_coeff = params.mu * threshold / (params.p_u * desired_gain(params));
  const QuadratureSpec inner = spec.tightened();

  const auto integrand = [&](double r) {
    const double s = s_coeff * std::pow(r, params.alpha1);
    const double weight = r * std::exp(-lambda * pi * r * r - s * params.sigma_n2);
    if (weight == 0.0) {
      return 0.0;
    }
    const double li = laplace_li_uplink(r, threshold, params, suppression);
    const double iu = laplace_iu_uplink(r, threshold, params, inner).value;
    if (li * iu == 0.0) {
      return 0.0;
    }
    const double ib = laplace_ib_uplink(r, threshold, params, inner).value;
    return weight * li * ib * iu;
  };
  const auto outer = integrate_semi_infinite(integrand, 0.0, radial_spec(params, spec));
  const double prefactor = (2.0 * pi * lambda) * (2.0 * pi * lambda);
  return {prefactor * outer.value, prefactor * outer.error};
}

QuadratureResult coverage_downlink(double rate, const NetworkParams& params, const QuadratureSpec& spec) {
  check_rate(rate);
  params.validate();
  const double threshold = rate_to_threshold(rate);
  const double lambda = params.lambda;
  const double s_coeff = params.mu * threshold / (params.p_b * desired_gain(params));
  const QuadratureSpec inner = spec.tightened();

  const auto integrand = [&](double r) {
    const double s = s_coeff * std::pow(r, params.alpha1);
    const double weight = r * std::exp(-lambda * pi * r * r - s * params.sigma_n2);
    if (weight == 0.0) {
      return 0.0;
    }
    const double ib = laplace_ib_downlink(r, threshold, params, inner).value;
    const double iu = laplace_iu_downlink(r, threshold, params, inner).value;
    return weight * ib * iu;
  };
  const auto outer = integrate_semi_infinite(integrand, 0.0, radial_spec(params, spec));
  const double prefactor = 2.0 * pi * lambda;
  return {prefactor * outer.value, prefactor * outer.error};
}

MetricEstimate outage_uplink(const OutageQuery& query, const QuadratureSpec& spec) {
  query.validate();
  auto m = from_coverage(coverage_uplink(query.rate, query.params, query.suppression, spec), query);
  m.metadata["link"] = 0.0;
  return m;
}

MetricEstimate outage_downlink(const OutageQuery& query, const QuadratureSpec& spec) {
  query.validate();
  auto m = from_coverage(coverage_downlink(query.rate, query.params, spec), query);
  m.metadata["link"] = 1.0;
  return m;
}

MetricEstimate outage(const OutageQuery& query, const QuadratureSpec& spec) {
  return query.link == Link::uplink ? outage_uplink(query, spec) : outage_downlink(query, spec);
}

namespace {

template <typename Coverage>
MetricEstimate rate_integral(const Coverage& coverage, const QuadratureSpec& spec) {
  // Double the upper limit until the coverage falls below the cutoff.
  double previous = 0.5;
  double previous_value = coverage(previous);
  double upper = 1.0;
  double upper_value = coverage(upper);
  while (upper_value >= kSumRateCoverageCutoff) {
    if (upper >= 1024.0) {
      throw ConvergenceError("coverage did not decay below the truncation level",
                             {upper_value, upper_value});
    }
    previous = upper;
    previous_value = upper_value;
    upper *= 2.0;
    upper_value = coverage(upper);
  }

  // Exponential tail fitted through the last two points.
  double tail = 0.0;
  if (upper_value > 0.0) {
    const double decay = std::log(previous_value / upper_value) / (upper - previous);
    tail = decay > 0.0 && std::isfinite(decay) ? upper_value / decay : upper_value * (upper - previous);
  }

  const auto body = integrate_finite(coverage, 0.0, upper, spec);
  MetricEstimate m;
  m.method = Method::analytic;
  m.value = std::max(0.0, body.value + tail);
  m.uncertainty = body.error + tail;
  m.metadata["truncation_rate"] = upper;
  m.metadata["tail"] = tail;
  return m;
}

} // namespace

SumRate sum_rate(const NetworkParams& params, bool suppression, const QuadratureSpec& spec) {
  params.validate();
  const QuadratureSpec point = spec.tightened();
  const auto up = [&](double t) { return std::clamp(coverage_uplink(t, params, suppression, point).value, 0.0, 1.0); };
  const auto down = [&](double t) { return std::clamp(coverage_downlink(t, params, point).value, 0.0, 1.0); };

  SumRate result;
  result.uplink = rate_integral(up, spec);
  result.downlink = rate_integral(down, spec);
  result.total.method = Method::analytic;
  result.total.value = result.uplink.value + result.downlink.value;
  result.total.uncertainty = result.uplink.uncertainty + result.downlink.uncertainty;
  result.total.metadata["suppression"] = suppression ? 1.0 : 0.0;
  return result;
}

MetricEstimate asymptotic_outage_uplink(double rate, const NetworkParams& params, const QuadratureSpec& spec) {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw DomainError("target rate R must be > 0");
  }
  params.validate();
  if (params.alpha1 != 4.0 || params.alpha2 != 4.0) {
    throw DomainError("asymptotic uplink outage requires alpha1 = alpha2 = 4");
  }
  if (params.p_b != params.p_u) {
    throw DomainError("asymptotic uplink outage requires p_b = p_u");
  }
  if (params.sigma_n2 != 0.0) {
    throw DomainError("asymptotic uplink outage requires sigma_n2 = 0");
  }
  if (params.gamma_b != params.gamma_u) {
    throw DomainError("asymptotic uplink outage requires gamma_b = gamma_u");
  }

  const double threshold = rate_to_threshold(rate);
  const double gamma = params.gamma_b;
  const double lambda = params.lambda;
  const double k = gamma * std::sqrt(threshold);
  // The side-lobe to main-lobe gain ratio H_b / G_u equals gamma for any
  // sector count, so it stays in the loop-interference term.
  const double li_coeff = gamma * params.mu * params.sigma_l2 * threshold;
  const QuadratureSpec inner = spec.tightened();

  const auto angular = [&](double z) {
    if (li_coeff == 0.0) {
      return 1.0;
    }
    const auto f = [&](double theta) {
      return 1.0 / (1.0 + li_coeff * z * z * passive_suppression_fraction(theta));
    };
    return integrate_finite(f, 0.0, pi, inner).value / pi;
  };
  const auto bs_term = [&](double z) {
    const double zk = z * k;
    const auto f = [&](double w) { return std::exp(-pi * lambda * (w + zk * std::atan(zk / w))); };
    return integrate_semi_infinite(f, 0.0, inner.with_scale(1.0 / (pi * lambda))).value;
  };
  const double user_rate = pi * lambda * k * std::atan(k);

  const auto integrand = [&](double z) {
    const double weight = std::exp(-lambda * pi * z - user_rate * z);
    if (weight == 0.0) {
      return 0.0;
    }
    return weight * angular(z) * bs_term(z);
  };
  const auto outer = integrate_semi_infinite(integrand, 0.0, spec.with_scale(1.0 / (pi * lambda)));
  const double prefactor = (pi * lambda) * (pi * lambda);

  MetricEstimate m;
  m.method = Method::asymptotic;
  m.value = std::clamp(1.0 - prefactor * outer.value, 0.0, 1.0);
  m.uncertainty = prefactor * outer.error;
  m.metadata["rate"] = rate;
  m.metadata["threshold"] = threshold;
  return m;
}

double asymptotic_outage_downlink(double rate, double gamma) {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw DomainError("target rate R must be > 0");
  }
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw DomainError("gamma must lie in [0, 1]");
  }
  const double k = gamma * std::sqrt(rate_to_threshold(rate));
  return 1.0 - 1.0 / (1.0 + k * (std::atan(k) + pi / 2.0));
}

} // namespace fdnet
