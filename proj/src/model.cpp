#include "fdnet/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fdnet {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) {
    throw DomainError(what);
  }
}

} // namespace

void NetworkParams::validate() const {
  require(std::isfinite(lambda) && lambda > 0.0, "lambda must be > 0");
  require(std::isfinite(mu) && mu > 0.0, "mu must be > 0");
  require(std::isfinite(p_b) && p_b > 0.0, "p_b must be > 0");
  require(std::isfinite(p_u) && p_u > 0.0, "p_u must be > 0");
  require(std::isfinite(alpha1) && alpha1 > 2.0, "alpha1 must be > 2 (path-loss exponent)");
  require(std::isfinite(alpha2) && alpha2 > 2.0, "alpha2 must be > 2 (path-loss exponent)");
  require(std::isfinite(sigma_n2) && sigma_n2 >= 0.0, "sigma_n2 must be >= 0");
  require(std::isfinite(sigma_l2) && sigma_l2 >= 0.0, "sigma_l2 must be >= 0");
  require(m_b >= 1, "m_b must be >= 1");
  require(m_u >= 1, "m_u must be >= 1");
  require(gamma_b >= 0.0 && gamma_b <= 1.0, "gamma_b must lie in [0, 1]");
  require(gamma_u >= 0.0 && gamma_u <= 1.0, "gamma_u must lie in [0, 1]");
}

AntennaPattern antenna_gains(int m, double gamma) {
  require(m >= 1, "sector count m must be >= 1");
  require(gamma >= 0.0 && gamma <= 1.0, "side-lobe ratio gamma must lie in [0, 1]");
  AntennaPattern p;
  p.m = m;
  p.gamma = gamma;
  p.g = m == 1 ? 1.0 : static_cast<double>(m) / (1.0 + gamma * static_cast<double>(m - 1));
  p.h = gamma * p.g;
  return p;
}

AntennaPattern antenna_for(const NetworkParams& params, Node node) {
  return node == Node::bs ? antenna_gains(params.m_b, params.gamma_b)
                          : antenna_gains(params.m_u, params.gamma_u);
}

double ThinningTable::total_density() const {
  return (cases[0].density + cases[1].density + cases[2].density) + cases[3].density;
}

ThinningTable thinning_table(double lambda, const AntennaPattern& rx, const AntennaPattern& tx) {
  require(std::isfinite(lambda) && lambda > 0.0, "lambda must be > 0");
  const double mi = rx.m;
  const double mj = tx.m;
  const double mm = mi * mj;

  ThinningTable t;
  t.cases[0] = {lambda / mm, rx.g * tx.g};
  t.cases[1] = {lambda * (mj - 1.0) / mm, rx.g * tx.h};
  t.cases[2] = {lambda * (mi - 1.0) / mm, tx.g * rx.h};
  t.cases[3] = {lambda * (mi - 1.0) * (mj - 1.0) / mm, rx.h * tx.h};
  // The last structurally nonzero case (in total_density() summation order)
  // absorbs the rounding. Stepping it alone can straddle lambda forever when
  // the exact sum lands on rounding ties, so an earlier case is also moved by
  // a few ulps to change the low bits of the partial sum.
  const int rest = mi > 1 && mj > 1 ? 3 : (mj > 1 ? 1 : (mi > 1 ? 2 : 0));
  if (rest == 0) {
    t.cases[0].density = lambda;
    return t;
  }
  double& d = t.cases[static_cast<std::size_t>(rest)].density;
  const double start = d;
  for (std::size_t lead = 0; lead < static_cast<std::size_t>(rest); ++lead) {
    double& c = t.cases[lead].density;
    const double original = c;
    if (original == 0.0) {
      continue;
    }
    for (int shift = 0; shift < 64; ++shift) {
      c = original;
      for (int k = 0; k < shift / 2 + shift % 2; ++k) {
        c = std::nextafter(c, shift % 2 ? lambda : 0.0);
      }
      d = 0.0;
      d = std::max(start * 0.5, lambda - t.total_density());
      for (int i = 0; i < 8 && t.total_density() != lambda; ++i) {
        d = std::nextafter(d, t.total_density() < lambda ? lambda : 0.0);
      }
      if (t.total_density() == lambda) {
        return t;
      }
    }
    c = original;
  }
  return t;
}

ThinningTable thinning_table(const NetworkParams& params, Node rx, Node tx) {
  return thinning_table(params.lambda, antenna_for(params, rx), antenna_for(params, tx));
}

double passive_suppression_fraction(double theta) {
  constexpr double pi = std::numbers::pi;
  require(theta >= -pi && theta < pi, "angle must lie in [-pi, pi)");
  return std::exp(-std::cos(std::abs(theta) - kMaxSuppressionAngle) - 0.5);
}

LiAngleModel li_angle_model(int m_b) {
  require(m_b >= 1, "m_b must be >= 1");
  constexpr double two_pi = 2.0 * std::numbers::pi;
  LiAngleModel model;
  model.grid.reserve(static_cast<std::size_t>(m_b));
  for (int k = 0; k < m_b; ++k) {
    // Offsets at or past half a turn fold to the negative side.
    const int folded = 2 * k >= m_b ? k - m_b : k;
    const double theta = two_pi * static_cast<double>(folded) / static_cast<double>(m_b);
    model.grid.push_back(std::max(theta, -std::numbers::pi));
  }
  std::sort(model.grid.begin(), model.grid.end());
  model.probability = 1.0 / static_cast<double>(m_b);
  return model;
}

double db_to_linear(double db) {
  return std::pow(10.0, db / 10.0);
}

double linear_to_db(double linear) {
  if (linear == 0.0) {
    return -std::numeric_limits<double>::infinity();
  }
  return 10.0 * std::log10(linear);
}

double rate_to_threshold(double rate) {
  return std::exp2(rate) - 1.0;
}

} // namespace fdnet
