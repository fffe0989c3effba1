#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace fdnet {

struct QuadratureSpec {
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  // No interval is bisected more than this many times.
  int max_depth = 48;
  // Budget on the number of live subintervals.
  int max_intervals = 4000;
  // Length scale of the map x = a + scale * t / (1 - t) used for [a, inf).
  double scale = 1.0;

  // Same spec with both tolerances divided by `factor`, for inner integrals.
  QuadratureSpec tightened(double factor = 10.0) const;
  QuadratureSpec with_scale(double s) const;

  void validate() const;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
};

// Thrown when the error target is not met within the depth/interval budget.
class ConvergenceError : public std::runtime_error {
public:
  ConvergenceError(const std::string& what, QuadratureResult best)
      : std::runtime_error(what), best_(best) {}

  const QuadratureResult& best_estimate() const noexcept { return best_; }

private:
  QuadratureResult best_;
};

using Integrand = std::function<double(double)>;

// Globally adaptive 21-point Gauss-Kronrod quadrature on [a, b]. The integrand
// is never evaluated at the endpoints, so integrable endpoint singularities
// are fine. The reported error is |K21 - G10| summed over subintervals.
QuadratureResult integrate_finite(const Integrand& f, double a, double b,
                                  const QuadratureSpec& spec = {});

// Integral over [a, inf) through x = a + L t / (1 - t), t in [0, 1), with
// L = spec.scale.
QuadratureResult integrate_semi_infinite(const Integrand& f, double a,
                                         const QuadratureSpec& spec = {});

} // namespace fdnet
