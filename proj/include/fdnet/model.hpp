#pragma once

#include <array>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace fdnet {

// Raised when a parameter lies outside the domain of the model.
class DomainError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Physical and model parameters of the network. All power-like quantities are
// linear; conversion from dB happens at the command-line boundary.
struct NetworkParams {
  double lambda = 1e-2;  // density of both the BS and the user process
  double mu = 1.0;       // fading power ~ Exp(rate mu)
  double p_b = 1.0;
  double p_u = 1.0;
  double alpha1 = 4.0;   // BS <-> user path-loss exponent
  double alpha2 = 4.0;   // BS <-> BS and user <-> user path-loss exponent
  double sigma_n2 = 0.0; // AWGN variance
  double sigma_l2 = 1e-3; // residual loop-interference variance
  int m_b = 4;
  int m_u = 4;
  double gamma_b = 0.2;
  double gamma_u = 0.2;

  // Throws DomainError naming the first offending field.
  void validate() const;

  bool operator==(const NetworkParams&) const = default;
};

// Circular-sector antenna: main lobe of width 2*pi/m with gain g, side lobe h.
struct AntennaPattern {
  int m = 1;
  double gamma = 0.0;
  double g = 1.0;
  double h = 0.0;
};

AntennaPattern antenna_gains(int m, double gamma);

enum class Node { bs, user };

AntennaPattern antenna_for(const NetworkParams& params, Node node);

struct ThinningCase {
  double density = 0.0;
  double gain = 0.0;
};

// The four orientation cases of an interfering link. Index 0..3 corresponds to
// case k = 1..4:
//   k=1  interferer beams towards the receiver, inside the receiver's main sector
//   k=2  interferer beams away, inside the main sector
//   k=3  interferer beams towards the receiver, outside the main sector
//   k=4  interferer beams away, outside the main sector
// The receiver is always the first antenna argument ("i") and the
// transmitter the second ("j").
struct ThinningTable {
  std::array<ThinningCase, 4> cases{};

  // Summed in the order (k1 + k2 + k3) + k4, which is how the last density is
  // constructed; the result equals lambda exactly.
  double total_density() const;
};

ThinningTable thinning_table(double lambda, const AntennaPattern& rx, const AntennaPattern& tx);

ThinningTable thinning_table(const NetworkParams& params, Node rx, Node tx);

// Fraction of the loop interference that survives passive suppression when the
// transmit and receive antennas are separated by theta. Requires theta in
// [-pi, pi); callers are expected to normalize.
double passive_suppression_fraction(double theta);

inline constexpr double kMinSuppressionFraction = 0.22313016014842982; // e^{-3/2}
inline constexpr double kMaxSuppressionAngle = 2.0 * std::numbers::pi / 3.0;

// Discrete distribution of the transmit/receive antenna angle at a BS with
// m_b sectors: the m_b sector offsets folded into [-pi, pi), each with
// probability 1/m_b. The grid is sorted ascending.
struct LiAngleModel {
  std::vector<double> grid;
  double probability = 1.0;
};

LiAngleModel li_angle_model(int m_b);

double db_to_linear(double db);

// linear_to_db(0) is -infinity.
double linear_to_db(double linear);

// Target rate in bits per channel use to SINR threshold, 2^R - 1.
double rate_to_threshold(double rate);

} // namespace fdnet
