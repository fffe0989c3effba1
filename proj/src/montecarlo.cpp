#include "fdnet/montecarlo.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

namespace fdnet {

namespace {

constexpr double pi = std::numbers::pi;

constexpr std::uint64_t kScalarStream = 0;
constexpr std::uint64_t kBsShells = 1;
constexpr std::uint64_t kUserShells = 2;

// Shell width in units of 1/sqrt(pi lambda). Shell boundaries do not depend
// on the window, so enlarging the window only appends points.
constexpr double kShellWidth = 2.0;

std::uint64_t link_key(Link link) {
  return link == Link::uplink ? 0 : 1;
}

double path_gain(double distance_sq, double alpha) {
  if (alpha == 4.0) {
    return 1.0 / (distance_sq * distance_sq);
  }
  return std::pow(distance_sq, -0.5 * alpha);
}

struct Marks {
  std::array<double, 4> cumulative{};
  std::array<double, 4> gain{};
};

Marks marks_for(const ThinningTable& table, double lambda) {
  Marks m;
  double acc = 0.0;
  for (std::size_t k = 0; k < 4; ++k) {
    acc += table.cases[k].density;
    m.cumulative[k] = acc / lambda;
    m.gain[k] = table.cases[k].gain;
  }
  m.cumulative[3] = 1.0;
  return m;
}

std::size_t pick_case(const Marks& marks, double u) {
  std::size_t k = 0;
  while (k < 3 && u >= marks.cumulative[k]) {
    ++k;
  }
  return k;
}

// One interfering process as seen by the receiver at the origin.
struct Process {
  Marks marks;
  double power = 1.0;
  double alpha = 4.0;
  double exclusion_sq = 0.0; // points at or inside this squared radius are dropped
  bool drop_nearest = false;
  std::uint64_t purpose = kBsShells;
};

struct TrialKey {
  std::uint64_t seed;
  std::uint64_t trial;
  std::uint64_t link;
};

double injected_interference(const Process& process, const std::vector<InjectedInterferer>& list) {
  double sum = 0.0;
  for (const auto& i : list) {
    if (i.thinning_case < 1 || i.thinning_case > 4 || !(i.distance > 0.0) || !(i.fading >= 0.0)) {
      throw DomainError("injected interferer outside the model domain");
    }
    sum += process.power * process.marks.gain[static_cast<std::size_t>(i.thinning_case - 1)] * i.fading *
           path_gain(i.distance * i.distance, process.alpha);
  }
  return sum;
}

double sampled_interference(const NetworkParams& params, double window, const TrialKey& key,
                            const Process& process) {
  thread_local std::vector<double> contributions;
  contributions.clear();

  const double width = kShellWidth / std::sqrt(pi * params.lambda);
  const double window_sq = window * window;
  const auto shells = static_cast<std::uint64_t>(std::ceil(window / width));

  double nearest_sq = std::numeric_limits<double>::infinity();
  std::size_t nearest = 0;
  for (std::uint64_t j = 0; j < shells; ++j) {
    const double inner_sq = (static_cast<double>(j) * width) * (static_cast<double>(j) * width);
    const double outer_sq = (static_cast<double>(j + 1) * width) * (static_cast<double>(j + 1) * width);
    Xoshiro256 rng(stream_seed(key.seed, key.trial, key.link, process.purpose, j));
    std::poisson_distribution<long> count_dist(params.lambda * pi * (outer_sq - inner_sq));
    const long n = count_dist(rng);
    for (long i = 0; i < n; ++i) {
      // Every point consumes the same three draws whether or not it is kept.
      const double d_sq = inner_sq + open_unit(rng) * (outer_sq - inner_sq);
      const double mark = open_unit(rng);
      const double fading = -std::log(open_unit(rng)) / params.mu;
      if (d_sq > window_sq || d_sq <= process.exclusion_sq) {
        continue;
      }
      const std::size_t k = pick_case(process.marks, mark);
      if (d_sq < nearest_sq) {
        nearest_sq = d_sq;
        nearest = contributions.size();
      }
      contributions.push_back(process.power * process.marks.gain[k] * fading * path_gain(d_sq, process.alpha));
    }
  }
  if (process.drop_nearest && !contributions.empty()) {
    contributions[nearest] = 0.0;
  }
  double sum = 0.0;
  for (double c : contributions) {
    sum += c;
  }
  return sum;
}

double interference(const NetworkParams& params, double window, const TrialKey& key, const Process& process,
                    const std::optional<std::vector<InjectedInterferer>>& injected) {
  if (injected) {
    return injected_interference(process, *injected);
  }
  return sampled_interference(params, window, key, process);
}

// Draws shared by every trial kind, taken in a fixed order from the scalar
// stream so that all architectures see the same numbers.
struct ScalarDraws {
  double link_distance;
  double link_fading;
  LiDraw li;
};

ScalarDraws scalar_draws(const NetworkParams& params, const TrialKey& key, const TrialFixture* fixture) {
  Xoshiro256 rng(stream_seed(key.seed, key.trial, key.link, kScalarStream, 0));
  const double u = open_unit(rng);
  const double h = -std::log(open_unit(rng)) / params.mu;
  ScalarDraws d{0.0, h, draw_li_angle_and_fading(params, rng)};
  d.link_distance = sample_nearest_distance(params.lambda, u);
  if (fixture != nullptr) {
    if (fixture->link_distance) {
      d.link_distance = *fixture->link_distance;
    }
    if (fixture->link_fading) {
      d.link_fading = *fixture->link_fading;
    }
    if (fixture->li_angle) {
      d.li.angle = *fixture->li_angle;
    }
    if (fixture->li_fading) {
      d.li.unit_fading = *fixture->li_fading;
    }
  }
  if (!(d.link_distance > 0.0)) {
    throw DomainError("link distance must be > 0");
  }
  return d;
}

enum class LoopModel { none, three_node_bs, full_duplex_bs, full_duplex_user };

struct TrialShape {
  Link link;
  LoopModel loop;
  bool drop_nearest_user; // two-node downlink: same-kind exclusion at the user
};

LinkBudget run_trial(const NetworkParams& params, const SimConfig& sim, std::uint64_t trial,
                     const TrialFixture* fixture, const TrialShape& shape) {
  const double window = sim.effective_window(params);
  const TrialKey key{sim.seed, trial, link_key(shape.link)};
  const ScalarDraws draws = scalar_draws(params, key, fixture);
  if (draws.link_distance > window) {
    throw ConfigurationError("window radius is smaller than the drawn link distance");
  }

  const auto bs = antenna_for(params, Node::bs);
  const auto user = antenna_for(params, Node::user);
  const double r = draws.link_distance;
  const double r_sq = r * r;

  LinkBudget b;
  b.noise = params.sigma_n2;
  const bool beyond_nearest = sim.nearest_bs_mode == NearestBsMode::beyond_nearest;

  Process bss;
  bss.purpose = kBsShells;
  bss.power = params.p_b;
  Process users;
  users.purpose = kUserShells;
  users.power = params.p_u;

  if (shape.link == Link::uplink) {
    b.signal = params.p_u * bs.g * user.g * draws.link_fading * path_gain(r_sq, params.alpha1);
    users.marks = marks_for(thinning_table(params, Node::bs, Node::user), params.lambda);
    users.alpha = params.alpha1;
    users.exclusion_sq = r_sq;
    bss.marks = marks_for(thinning_table(params, Node::bs, Node::bs), params.lambda);
    bss.alpha = params.alpha2;
    bss.drop_nearest = beyond_nearest;
  } else {
    b.signal = params.p_b * bs.g * user.g * draws.link_fading * path_gain(r_sq, params.alpha1);
    bss.marks = marks_for(thinning_table(params, Node::user, Node::bs), params.lambda);
    bss.alpha = params.alpha1;
    bss.exclusion_sq = r_sq;
    users.marks = marks_for(thinning_table(params, Node::user, Node::user), params.lambda);
    users.alpha = params.alpha2;
    users.drop_nearest = shape.drop_nearest_user;
  }

  const std::optional<std::vector<InjectedInterferer>> none;
  b.bs_interference = interference(params, window, key, bss, fixture ? fixture->bs_interferers : none);
  b.user_interference = interference(params, window, key, users, fixture ? fixture->user_interferers : none);

  switch (shape.loop) {
  case LoopModel::none:
    break;
  case LoopModel::three_node_bs:
    b.loop = li_power(params, sim.suppression, draws.li);
    break;
  case LoopModel::full_duplex_bs:
    b.loop = params.p_b * bs.g * bs.g * params.sigma_l2 * draws.li.unit_fading;
    break;
  case LoopModel::full_duplex_user:
    b.loop = params.p_u * user.g * user.g * params.sigma_l2 * draws.li.unit_fading;
    break;
  }
  return b;
}

} // namespace

std::string to_string(Architecture arch) {
  return arch == Architecture::two_node ? "two-node" : "three-node";
}

std::string to_string(NearestBsMode mode) {
  return mode == NearestBsMode::beyond_nearest ? "beyond-nearest" : "all-other";
}

double default_window_radius(double lambda) {
  return 20.0 / std::sqrt(pi * lambda);
}

double SimConfig::effective_window(const NetworkParams& params) const {
  return window_radius > 0.0 ? window_radius : default_window_radius(params.lambda);
}

void SimConfig::validate() const {
  if (!(window_radius >= 0.0) || !std::isfinite(window_radius)) {
    throw DomainError("window_radius must be > 0 (or 0 for the default)");
  }
  if (trials < 1) {
    throw DomainError("trials must be >= 1");
  }
}

double LinkBudget::sinr() const {
  const double denominator = noise + loop + bs_interference + user_interference;
  if (denominator == 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  return signal / denominator;
}

double sample_nearest_distance(double lambda, double u) {
  if (!(u > 0.0 && u < 1.0)) {
    throw DomainError("uniform draw must lie in (0, 1)");
  }
  if (!(lambda > 0.0)) {
    throw DomainError("lambda must be > 0");
  }
  return std::sqrt(-std::log(u) / (pi * lambda));
}

double li_power(const NetworkParams& params, bool suppression, const LiDraw& draw) {
  const auto bs = antenna_for(params, Node::bs);
  const bool boresight = draw.angle == 0.0;
  const double surviving = suppression && !boresight ? passive_suppression_fraction(draw.angle) : 1.0;
  const double lobe = boresight ? 1.0 : params.gamma_b;
  return params.p_b * bs.g * bs.g * params.sigma_l2 * draw.unit_fading * surviving * lobe;
}

LinkBudget uplink_trial(const NetworkParams& params, const SimConfig& sim, std::uint64_t trial,
                        const TrialFixture* fixture) {
  return run_trial(params, sim, trial, fixture, {Link::uplink, LoopModel::three_node_bs, false});
}

LinkBudget downlink_trial(const NetworkParams& params, const SimConfig& sim, std::uint64_t trial,
                          const TrialFixture* fixture) {
  return run_trial(params, sim, trial, fixture, {Link::downlink, LoopModel::none, false});
}

LinkBudget two_node_trial(const NetworkParams& params, const SimConfig& sim, std::uint64_t trial, Link link,
                          const TrialFixture* fixture) {
  if (link == Link::uplink) {
    return run_trial(params, sim, trial, fixture, {Link::uplink, LoopModel::full_duplex_bs, false});
  }
  const bool drop = sim.nearest_bs_mode == NearestBsMode::beyond_nearest;
  return run_trial(params, sim, trial, fixture, {Link::downlink, LoopModel::full_duplex_user, drop});
}

double uplink_sinr_trial(const NetworkParams& params, const SimConfig& sim, std::uint64_t trial,
                         const TrialFixture* fixture) {
  return uplink_trial(params, sim, trial, fixture).sinr();
}

double downlink_sinr_trial(const NetworkParams& params, const SimConfig& sim, std::uint64_t trial,
                           const TrialFixture* fixture) {
  return downlink_trial(params, sim, trial, fixture).sinr();
}

double two_node_sinr_trial(const NetworkParams& params, const SimConfig& sim, std::uint64_t trial, Link link,
                           const TrialFixture* fixture) {
  return two_node_trial(params, sim, trial, link, fixture).sinr();
}

std::vector<double> simulate_sinr(Link link, const NetworkParams& params, const SimConfig& sim) {
  params.validate();
  sim.validate();
  const auto n = sim.trials;
  std::vector<double> out(n);

  const auto one = [&](std::uint64_t i) {
    if (sim.architecture == Architecture::two_node) {
      return two_node_sinr_trial(params, sim, i, link);
    }
    return link == Link::uplink ? uplink_sinr_trial(params, sim, i) : downlink_sinr_trial(params, sim, i);
  };

  unsigned threads = sim.threads != 0 ? sim.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, (n + 1023) / 1024));
  if (threads <= 1) {
    for (std::uint64_t i = 0; i < n; ++i) {
      out[i] = one(i);
    }
    return out;
  }

  constexpr std::uint64_t chunk = 1024;
  std::atomic<std::uint64_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        try {
          for (std::uint64_t start = next.fetch_add(chunk); start < n && !failed; start = next.fetch_add(chunk)) {
            const auto stop = std::min(n, start + chunk);
            for (std::uint64_t i = start; i < stop; ++i) {
              out[i] = one(i);
            }
          }
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) {
            error = std::current_exception();
          }
          failed = true;
        }
      });
    }
  }
  if (error) {
    std::rethrow_exception(error);
  }
  return out;
}

MetricEstimate outage_from_samples(const std::vector<double>& sinr, double rate) {
  if (sinr.empty()) {
    throw DomainError("trials must be >= 1");
  }
  std::uint64_t outages = 0;
  for (double s : sinr) {
    if (std::log2(1.0 + s) < rate) {
      ++outages;
    }
  }
  const double n = static_cast<double>(sinr.size());
  const double p = static_cast<double>(outages) / n;
  MetricEstimate m;
  m.method = Method::montecarlo;
  m.value = p;
  m.uncertainty = std::sqrt(p * (1.0 - p) / n);
  m.metadata["rate"] = rate;
  m.metadata["trials"] = n;
  return m;
}

MetricEstimate estimate_outage(Link link, double rate, const NetworkParams& params, const SimConfig& sim) {
  if (!(rate >= 0.0)) {
    throw DomainError("rate must be >= 0");
  }
  auto m = outage_from_samples(simulate_sinr(link, params, sim), rate);
  m.metadata["seed"] = static_cast<double>(sim.seed);
  return m;
}

namespace {

MetricEstimate mean_estimate(const std::vector<double>& values) {
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) {
    sum += v;
  }
  const double mean = sum / n;
  double sq = 0.0;
  for (double v : values) {
    sq += (v - mean) * (v - mean);
  }
  MetricEstimate m;
  m.method = Method::montecarlo;
  m.value = mean;
  m.uncertainty = values.size() > 1 ? std::sqrt(sq / (n - 1.0) / n) : 0.0;
  m.metadata["trials"] = n;
  return m;
}

} // namespace

SumRate estimate_sum_rate(const NetworkParams& params, const SimConfig& sim) {
  const auto up = simulate_sinr(Link::uplink, params, sim);
  const auto down = simulate_sinr(Link::downlink, params, sim);
  std::vector<double> up_rate(up.size());
  std::vector<double> down_rate(down.size());
  std::vector<double> total(up.size());
  for (std::size_t i = 0; i < up.size(); ++i) {
    up_rate[i] = std::log2(1.0 + up[i]);
    down_rate[i] = std::log2(1.0 + down[i]);
    total[i] = up_rate[i] + down_rate[i];
  }
  SumRate result{mean_estimate(up_rate), mean_estimate(down_rate), mean_estimate(total)};
  result.total.metadata["seed"] = static_cast<double>(sim.seed);
  return result;
}

} // namespace fdnet
