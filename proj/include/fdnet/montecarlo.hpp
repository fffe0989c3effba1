#pragma once

#include "fdnet/analytic.hpp"
#include "fdnet/model.hpp"
#include "fdnet/rng.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

namespace fdnet {

enum class Architecture { two_node, three_node };

// Which BSs interfere at the uplink BS (and, in the two-node architecture,
// which users interfere at the user). beyond_nearest drops the nearest other
// node of the same kind; all_other keeps every node.
enum class NearestBsMode { beyond_nearest, all_other };

std::string to_string(Architecture arch);
std::string to_string(NearestBsMode mode);

class ConfigurationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct SimConfig {
  // Radius of the sampling disk; 0 selects default_window_radius(lambda).
  double window_radius = 0.0;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 1;
  Architecture architecture = Architecture::three_node;
  bool suppression = true;
  NearestBsMode nearest_bs_mode = NearestBsMode::beyond_nearest;
  // Worker threads; 0 uses the hardware concurrency. Results do not depend on it.
  unsigned threads = 0;

  double effective_window(const NetworkParams& params) const;
  void validate() const;

  bool operator==(const SimConfig&) const = default;
};

// 20 / sqrt(pi lambda): about 400 expected nodes per process in the window.
double default_window_radius(double lambda);

// Overrides for the random draws of one trial. Interferer lists replace the
// sampled process entirely (no exclusion is applied to them).
struct InjectedInterferer {
  double distance = 1.0;
  int thinning_case = 1; // 1..4
  double fading = 1.0;   // channel power
};

struct TrialFixture {
  std::optional<double> link_distance;
  std::optional<double> link_fading;
  std::optional<std::vector<InjectedInterferer>> bs_interferers;
  std::optional<std::vector<InjectedInterferer>> user_interferers;
  std::optional<double> li_angle;  // must lie on the angle grid
  std::optional<double> li_fading; // h_l / sigma_l2, unit mean
};

// Powers at the receiver of one trial.
struct LinkBudget {
  double signal = 0.0;
  double noise = 0.0;
  double loop = 0.0;
  double bs_interference = 0.0;
  double user_interference = 0.0;

  // +infinity when the denominator is exactly zero.
  double sinr() const;
};

// Inverse CDF of the nearest-neighbour distance, sqrt(-ln(u) / (pi lambda)).
double sample_nearest_distance(double lambda, double u);

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// Homogeneous PPP on the disk of the given radius centred at the origin.
template <typename Rng>
std::vector<Point> sample_ppp(double density, double window_radius, Rng& rng) {
  if (!(density >= 0.0) || !(window_radius > 0.0)) {
    throw DomainError("sample_ppp requires density >= 0 and window_radius > 0");
  }
  std::vector<Point> points;
  const double mean = density * std::numbers::pi * window_radius * window_radius;
  if (mean == 0.0) {
    return points;
  }
  std::poisson_distribution<long> count_dist(mean);
  const long n = count_dist(rng);
  points.reserve(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    const double radius = window_radius * std::sqrt(open_unit(rng));
    const double angle = 2.0 * std::numbers::pi * open_unit(rng);
    points.push_back({radius * std::cos(angle), radius * std::sin(angle)});
  }
  return points;
}

// Angle, fading and Bernoulli main-lobe indicator behind one LI draw.
struct LiDraw {
  double angle = 0.0;
  double unit_fading = 1.0;
};

// Loop-interference power at the three-node BS for a given angle and unit
// fading: P_b G_b^2 sigma_l2 e f(theta) (B0 + gamma_b (1 - B0)).
double li_power(const NetworkParams& params, bool suppression, const LiDraw& draw);

template <typename Rng>
LiDraw draw_li_angle_and_fading(const NetworkParams& params, Rng& rng) {
  const auto model = li_angle_model(params.m_b);
  const auto index = static_cast<std::size_t>(open_unit(rng) * static_cast<double>(params.m_b));
  LiDraw d;
  d.angle = model.grid[std::min(index, model.grid.size() - 1)];
  d.unit_fading = -std::log(open_unit(rng));
  return d;
}

template <typename Rng>
double draw_li_term(const NetworkParams& params, bool suppression, Rng& rng) {
  return li_power(params, suppression, draw_li_angle_and_fading(params, rng));
}

// Three-node uplink: SINR at the BS.
LinkBudget uplink_trial(const NetworkParams& params, const SimConfig& sim, std::uint64_t trial,
                        const TrialFixture* fixture = nullptr);

// Three-node downlink: SINR at the half-duplex downlink user.
LinkBudget downlink_trial(const NetworkParams& params, const SimConfig& sim, std::uint64_t trial,
                          const TrialFixture* fixture = nullptr);

// Two-node architecture: both ends full duplex, no passive suppression.
LinkBudget two_node_trial(const NetworkParams& params, const SimConfig& sim, std::uint64_t trial,
                          Link link, const TrialFixture* fixture = nullptr);

double uplink_sinr_trial(const NetworkParams& params, const SimConfig& sim, std::uint64_t trial,
                         const TrialFixture* fixture = nullptr);
double downlink_sinr_trial(const NetworkParams& params, const SimConfig& sim, std::uint64_t trial,
                           const TrialFixture* fixture = nullptr);
double two_node_sinr_trial(const NetworkParams& params, const SimConfig& sim, std::uint64_t trial,
                           Link link, const TrialFixture* fixture = nullptr);

// Per-trial SINR samples in trial-index order for sim.architecture.
std::vector<double> simulate_sinr(Link link, const NetworkParams& params, const SimConfig& sim);

// Fraction of samples with log2(1 + SINR) < rate, with its binomial standard error.
MetricEstimate outage_from_samples(const std::vector<double>& sinr, double rate);

MetricEstimate estimate_outage(Link link, double rate, const NetworkParams& params, const SimConfig& sim);

// Mean of log2(1 + SINR_u) + log2(1 + SINR_d) over paired trials.
SumRate estimate_sum_rate(const NetworkParams& params, const SimConfig& sim);

} // namespace fdnet
