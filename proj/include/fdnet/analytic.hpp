#pragma once

#include "fdnet/model.hpp"
#include "fdnet/numerics.hpp"

#include <map>
#include <string>

namespace fdnet {

enum class Link { uplink, downlink };
enum class Method { analytic, asymptotic, montecarlo };

std::string to_string(Link link);
std::string to_string(Method method);

struct OutageQuery {
  double rate = 0.1; // target rate R, bits per channel use
  NetworkParams params;
  bool suppression = true;
  Link link = Link::uplink;

  void validate() const;
};

// A metric value together with how it was obtained. `uncertainty` is a
// quadrature error estimate for analytic values and a standard error for
// Monte Carlo values.
struct MetricEstimate {
  double value = 0.0;
  Method method = Method::analytic;
  double uncertainty = 0.0;
  std::map<std::string, double> metadata;
};

// Laplace transform of the residual loop interference at the BS, evaluated at
// s = mu T r^alpha1 / (P_u G_b G_u). With suppression off the angular
// attenuation is dropped (f = 1) but the side-lobe gain for nonzero angles
// remains.
double laplace_li_uplink(double r, double threshold, const NetworkParams& params, bool suppression);

// Laplace transform of the inter-BS interference at the uplink BS, in the
// unnormalized form that integrates over the nearest-BS distance rho with
// weight rho exp(-lambda pi rho^2) only. Multiply by 2 pi lambda to get
// E[exp(-s I_b)]; at T = 0 the raw value is 1 / (2 pi lambda).
QuadratureResult laplace_ib_uplink(double r, double threshold, const NetworkParams& params,
                                   const QuadratureSpec& spec = {});

// Laplace transform of the interference from uplink users farther than r.
QuadratureResult laplace_iu_uplink(double r, double threshold, const NetworkParams& params,
                                   const QuadratureSpec& spec = {});

// Laplace transform at the downlink user of interference from BSs beyond r.
QuadratureResult laplace_ib_downlink(double r, double threshold, const NetworkParams& params,
                                     const QuadratureSpec& spec = {});

// Laplace transform at the downlink user of interference from all uplink users.
QuadratureResult laplace_iu_downlink(double r, double threshold, const NetworkParams& params,
                                     const QuadratureSpec& spec = {});

// Coverage probability P[log2(1 + SINR) >= R] (the complement of outage),
// evaluated directly so that small coverage keeps full relative precision.
QuadratureResult coverage_uplink(double rate, const NetworkParams& params, bool suppression,
                                 const QuadratureSpec& spec = {});
QuadratureResult coverage_downlink(double rate, const NetworkParams& params,
                                   const QuadratureSpec& spec = {});

MetricEstimate outage_uplink(const OutageQuery& query, const QuadratureSpec& spec = {});

// The downlink user is half duplex; query.suppression is ignored.
MetricEstimate outage_downlink(const OutageQuery& query, const QuadratureSpec& spec = {});

MetricEstimate outage(const OutageQuery& query, const QuadratureSpec& spec = {});

// Coverage integrals over the rate are truncated where coverage drops below
// this level; the remainder is an exponential-tail estimate.
inline constexpr double kSumRateCoverageCutoff = 1e-4;

// Tolerances used by sum_rate unless the caller passes its own. Each rate
// point is itself a nested integral, so the outer rate integral runs looser
// than the outage default.
inline QuadratureSpec sum_rate_quadrature() {
  QuadratureSpec spec;
  spec.rel_tol = 1e-6;
  spec.abs_tol = 1e-6;
  return spec;
}

struct SumRate {
  MetricEstimate uplink;
  MetricEstimate downlink;
  MetricEstimate total;
};

// Average sum rate as the integral of the coverage probability over the
// rate. metadata["truncation_rate"] holds the rate where each integral stops
// and metadata["tail"] the added tail estimate.
SumRate sum_rate(const NetworkParams& params, bool suppression,
                 const QuadratureSpec& spec = sum_rate_quadrature());

// Uplink outage in the limit of infinitely many sectors (M_b = M_u -> inf).
// Requires alpha1 = alpha2 = 4, P_b = P_u, sigma_n2 = 0 and gamma_b = gamma_u;
// the sector counts in `params` are ignored. Passive suppression is applied.
MetricEstimate asymptotic_outage_uplink(double rate, const NetworkParams& params,
                                        const QuadratureSpec& spec = {});

// Downlink outage in the same limit; closed form, independent of density.
double asymptotic_outage_downlink(double rate, double gamma);

} // namespace fdnet
