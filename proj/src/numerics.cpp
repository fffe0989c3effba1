#include "fdnet/numerics.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace fdnet {

namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 21>;
using Gauss = boost::math::quadrature::gauss<double, 10>;

struct Segment {
  double a;
  double b;
  double value;
  double error;
  int depth;

  bool operator<(const Segment& other) const { return error < other.error; }
};

// One 21-point Kronrod / 10-point Gauss pair on [a, b]. Node 0 of the
// Kronrod table is the midpoint; odd-indexed nodes are the Gauss nodes.
Segment apply_rule(const Integrand& f, double a, double b, int depth) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const auto& x = Kronrod::abscissa();
  const auto& wk = Kronrod::weights();
  const auto& wg = Gauss::weights();

  const double f0 = f(mid);
  double kronrod = f0 * wk[0];
  double gauss = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double fp = f(mid + half * x[i]);
    const double fm = f(mid - half * x[i]);
    kronrod += (fp + fm) * wk[i];
    if (i % 2 == 1) {
      gauss += (fp + fm) * wg[i / 2];
    }
  }
  kronrod *= half;
  gauss *= half;
  const double err = std::max(std::abs(kronrod - gauss),
                              2.0 * std::numeric_limits<double>::epsilon() * std::abs(kronrod));
  return {a, b, kronrod, err, depth};
}

struct Totals {
  double value = 0.0;
  double error = 0.0;
};

Totals sum_segments(const std::vector<Segment>& heap, const std::vector<Segment>& frozen) {
  // Re-summed from scratch; the running totals in the loop accumulate drift.
  Totals t;
  for (const auto& s : heap) {
    t.value += s.value;
    t.error += s.error;
  }
  for (const auto& s : frozen) {
    t.value += s.value;
    t.error += s.error;
  }
  return t;
}

double target(const QuadratureSpec& spec, double value) {
  return std::max(spec.abs_tol, spec.rel_tol * std::abs(value));
}

} // namespace

QuadratureSpec QuadratureSpec::tightened(double factor) const {
  QuadratureSpec s = *this;
  s.rel_tol /= factor;
  s.abs_tol /= factor;
  return s;
}

QuadratureSpec QuadratureSpec::with_scale(double s) const {
  QuadratureSpec out = *this;
  out.scale = s;
  return out;
}

void QuadratureSpec::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
    throw std::invalid_argument("quadrature tolerances must be > 0");
  }
  if (max_depth < 1 || max_intervals < 1) {
    throw std::invalid_argument("quadrature depth and interval budget must be >= 1");
  }
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw std::invalid_argument("semi-infinite scale must be a positive finite number");
  }
}

QuadratureResult integrate_finite(const Integrand& f, double a, double b, const QuadratureSpec& spec) {
  spec.validate();
  if (!(a <= b)) {
    throw std::invalid_argument("integrate_finite requires a <= b");
  }
  if (a == b) {
    return {0.0, 0.0};
  }

  std::vector<Segment> heap{apply_rule(f, a, b, 0)};
  std::vector<Segment> frozen; // at maximum depth or too narrow to split
  double running_value = heap.front().value;
  double running_error = heap.front().error;
  while (running_error > target(spec, running_value)) {
    if (heap.empty()) {
      break;
    }
    if (static_cast<int>(heap.size() + frozen.size()) >= spec.max_intervals) {
      break;
    }
    std::pop_heap(heap.begin(), heap.end());
    const Segment worst = heap.back();
    heap.pop_back();

    const double mid = 0.5 * (worst.a + worst.b);
    if (worst.depth >= spec.max_depth || !(mid > worst.a && mid < worst.b)) {
      frozen.push_back(worst);
      continue;
    }
    const Segment left = apply_rule(f, worst.a, mid, worst.depth + 1);
    const Segment right = apply_rule(f, mid, worst.b, worst.depth + 1);
    running_value += left.value + right.value - worst.value;
    running_error += left.error + right.error - worst.error;
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end());
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end());
  }

  const Totals totals = sum_segments(heap, frozen);
  QuadratureResult result{totals.value, totals.error};
  if (!std::isfinite(result.value)) {
    throw ConvergenceError("integrand produced a non-finite value", result);
  }
  if (result.error > target(spec, result.value)) {
    std::ostringstream msg;
    msg << "quadrature did not converge on [" << a << ", " << b << "]: estimate " << result.value
        << ", error " << result.error;
    throw ConvergenceError(msg.str(), result);
  }
  return result;
}

QuadratureResult integrate_semi_infinite(const Integrand& f, double a, const QuadratureSpec& spec) {
  spec.validate();
  const double scale = spec.scale;
  const Integrand mapped = [&](double t) {
    const double one_minus = 1.0 - t;
    const double x = a + scale * t / one_minus;
    if (!std::isfinite(x)) {
      return 0.0;
    }
    const double fx = f(x);
    if (fx == 0.0) {
      return 0.0;
    }
    return fx * scale / (one_minus * one_minus);
  };
  return integrate_finite(mapped, 0.0, 1.0, spec);
}

} // namespace fdnet
