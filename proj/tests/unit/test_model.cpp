#include "fdnet/model.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

using namespace fdnet;
using std::numbers::pi;

TEST_SUITE("model") {

TEST_CASE("antenna gains for fixed inputs") {
  auto a = antenna_gains(1, 0.2);
  CHECK(a.g == doctest::Approx(1.0));
  CHECK(a.h == doctest::Approx(0.2));

  a = antenna_gains(4, 0.2);
  CHECK(a.g == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(a.h == doctest::Approx(0.5).epsilon(1e-15));

  a = antenna_gains(8, 0.0);
  CHECK(a.g == 8.0);
  CHECK(a.h == 0.0);
}

TEST_CASE("antenna gains reject bad domains") {
  CHECK_THROWS_AS(antenna_gains(0, 0.2), DomainError);
  CHECK_THROWS_AS(antenna_gains(4, -0.1), DomainError);
  CHECK_THROWS_AS(antenna_gains(4, 1.1), DomainError);
}

TEST_CASE("antenna normalization holds for all m and gamma") {
  for (int m = 1; m <= 256; ++m) {
    for (int k = 0; k <= 100; ++k) {
      const double gamma = k / 100.0;
      const auto a = antenna_gains(m, gamma);
      const double total = a.g / m + (m - 1) * a.h / m;
      CHECK(std::abs(total - 1.0) <= 4 * std::numeric_limits<double>::epsilon());
    }
  }
}

TEST_CASE("thinning table, omnidirectional") {
  const auto omni = antenna_gains(1, 0.2);
  const auto t = thinning_table(0.01, omni, omni);
  CHECK(t.cases[0].density == 0.01);
  CHECK(t.cases[0].gain == 1.0);
  for (int k = 1; k < 4; ++k) {
    CHECK(t.cases[k].density == 0.0);
  }
}

TEST_CASE("thinning table, four sectors") {
  const auto a = antenna_gains(4, 0.2);
  const auto t = thinning_table(0.01, a, a);
  const double dens[] = {0.000625, 0.001875, 0.001875, 0.005625};
  const double gains[] = {6.25, 1.25, 1.25, 0.25};
  for (int k = 0; k < 4; ++k) {
    CHECK(t.cases[k].density == doctest::Approx(dens[k]).epsilon(1e-12));
    CHECK(t.cases[k].gain == doctest::Approx(gains[k]).epsilon(1e-12));
  }
}

TEST_CASE("thinning orientation: case 2 uses the transmitter side lobe") {
  // rx has 2 sectors, tx has 8: case 2 density is lambda (M_tx - 1) / (M_rx M_tx).
  const auto rx = antenna_gains(2, 0.1);
  const auto tx = antenna_gains(8, 0.3);
  const auto t = thinning_table(1.0, rx, tx);
  CHECK(t.cases[1].density == doctest::Approx(7.0 / 16.0));
  CHECK(t.cases[2].density == doctest::Approx(1.0 / 16.0));
  CHECK(t.cases[1].gain == doctest::Approx(rx.g * tx.h));
  CHECK(t.cases[2].gain == doctest::Approx(tx.g * rx.h));
}

TEST_CASE("thinning densities sum to lambda exactly") {
  for (double lambda : {1e-4, 1e-2, 0.37, 1.0, 12.5}) {
    for (int mi = 1; mi <= 16; ++mi) {
      for (int mj = 1; mj <= 16; ++mj) {
        const auto t = thinning_table(lambda, antenna_gains(mi, 0.2), antenna_gains(mj, 0.3));
        CHECK(t.total_density() == lambda);
        for (const auto& c : t.cases) {
          CHECK(c.density >= 0.0);
        }
      }
    }
  }
}

TEST_CASE("suppression fraction fixed points") {
  CHECK(passive_suppression_fraction(0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(passive_suppression_fraction(2 * pi / 3) == doctest::Approx(0.22313016014842982).epsilon(1e-14));
  CHECK(passive_suppression_fraction(-2 * pi / 3) == doctest::Approx(0.22313016014842982).epsilon(1e-14));
  CHECK(passive_suppression_fraction(-pi) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK_THROWS_AS(passive_suppression_fraction(pi), DomainError);
  CHECK_THROWS_AS(passive_suppression_fraction(-4.0), DomainError);
}

TEST_CASE("suppression fraction bounds, symmetry and extrema on a dense sweep") {
  const int n = 100000;
  double lo = 2.0;
  double hi = -1.0;
  double arg_lo = 0.0;
  double arg_hi = 1.0;
  for (int i = 0; i < n; ++i) {
    const double theta = -pi + 2 * pi * i / n;
    const double f = passive_suppression_fraction(theta);
    REQUIRE(f >= kMinSuppressionFraction * (1 - 1e-15));
    REQUIRE(f <= 1.0 + 1e-15);
    if (theta > -pi) {
      REQUIRE(f == passive_suppression_fraction(-theta));
    }
    if (f < lo) {
      lo = f;
      arg_lo = theta;
    }
    if (f > hi) {
      hi = f;
      arg_hi = theta;
    }
  }
  CHECK(std::abs(std::abs(arg_lo) - kMaxSuppressionAngle) < 1e-3);
  CHECK(std::abs(arg_hi) < 1e-3);
}

TEST_CASE("angle grid") {
  auto g = li_angle_model(1);
  CHECK(g.grid == std::vector<double>{0.0});
  CHECK(g.probability == 1.0);

  g = li_angle_model(2);
  REQUIRE(g.grid.size() == 2);
  CHECK(g.grid[0] == doctest::Approx(-pi));
  CHECK(g.grid[1] == 0.0);
  CHECK(g.probability == 0.5);

  g = li_angle_model(4);
  REQUIRE(g.grid.size() == 4);
  CHECK(g.grid[0] == doctest::Approx(-pi));
  CHECK(g.grid[1] == doctest::Approx(-pi / 2));
  CHECK(g.grid[2] == 0.0);
  CHECK(g.grid[3] == doctest::Approx(pi / 2));
}

TEST_CASE("angle grids are in domain, sized m_b, and sum to one") {
  for (int m = 1; m <= 64; ++m) {
    const auto g = li_angle_model(m);
    CHECK(g.grid.size() == static_cast<std::size_t>(m));
    CHECK(g.probability * m == doctest::Approx(1.0));
    for (double theta : g.grid) {
      CHECK(theta >= -pi);
      CHECK(theta < pi);
      CHECK_NOTHROW(passive_suppression_fraction(theta));
    }
  }
}

TEST_CASE("decibel conversions") {
  CHECK(db_to_linear(0.0) == 1.0);
  CHECK(db_to_linear(-30.0) == doctest::Approx(1e-3).epsilon(1e-15));
  CHECK(db_to_linear(10.0) == doctest::Approx(10.0).epsilon(1e-15));
  CHECK(db_to_linear(-std::numeric_limits<double>::infinity()) == 0.0);
  CHECK(linear_to_db(0.0) == -std::numeric_limits<double>::infinity());
  for (double db = -100.0; db <= 100.0; db += 0.7) {
    CHECK(linear_to_db(db_to_linear(db)) == doctest::Approx(db).epsilon(1e-12));
  }
  CHECK(rate_to_threshold(1.0) == 1.0);
  CHECK(rate_to_threshold(0.1) == doctest::Approx(std::pow(2.0, 0.1) - 1.0));
}

TEST_CASE("parameter validation names the field") {
  NetworkParams p;
  CHECK_NOTHROW(p.validate());
  p.alpha1 = 1.5;
  try {
    p.validate();
    FAIL("expected DomainError");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("alpha1") != std::string::npos);
  }
  p = {};
  p.lambda = 0.0;
  CHECK_THROWS_AS(p.validate(), DomainError);
  p = {};
  p.m_b = 0;
  CHECK_THROWS_AS(p.validate(), DomainError);
  p = {};
  p.sigma_l2 = -1.0;
  CHECK_THROWS_AS(p.validate(), DomainError);
}

} // TEST_SUITE
