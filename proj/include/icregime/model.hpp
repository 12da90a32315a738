#pragma once

#include <string>
#include <vector>

namespace icregime::model {

// Normalization tolerance for distributions constructed in-process.
inline constexpr double kConstructTol = 1e-12;
// Looser tolerance applied at the file boundary; parsed laws are
// renormalized before they enter the library.
inline constexpr double kFileTol = 1e-9;
// Brute-force search caps for discrete channels.
inline constexpr int kMaxAlphabet = 8;
inline constexpr int kMaxInputTuples = 4096;

// Standard-form Gaussian interference channel: Y_j = sum_i a_{ji} X_i + Z_j
// with unit direct gains, unit noise variances and E[X_i^2] <= P_i.
// Noise is implicit and never stored.
struct GaussianIC {
  int users = 0;                            // K
  std::vector<std::vector<double>> gains;   // [receiver][transmitter]
  std::vector<double> powers;

  // Validates and throws std::invalid_argument with the full diagnostic list
  // on failure.
  static GaussianIC create(std::vector<std::vector<double>> gains,
                           std::vector<double> powers);
};

// Generic two-output Gaussian system: a joint block of mu1 inputs feeding
// both outputs plus mu2 independent conditioning inputs, unit noises.
//   Y1 = sum a_i X_i + Z1,  Y2 = sum b_i X_i + Z2
struct TwoOutputSystem {
  int mu1 = 0;
  int mu2 = 0;
  std::vector<double> a;   // length mu1 + mu2
  std::vector<double> b;

  static TwoOutputSystem create(int mu1, int mu2, std::vector<double> a,
                                std::vector<double> b);
};

struct DiscretePMF {
  std::vector<double> probs;

  static DiscretePMF create(std::vector<double> probs,
                            double tol = kConstructTol);
};

// Row-stochastic matrix; rows index the conditioning value.
struct StochasticMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> p;   // row-major

  double operator()(int r, int c) const { return p[static_cast<size_t>(r) * cols + c]; }

  static StochasticMatrix create(int rows, int cols, std::vector<double> p,
                                 double tol = kConstructTol);
};

// Discrete channel with two outputs: P(y1, y2 | x_1 .. x_{mu1+mu2}).
// The first mu1 inputs form the joint block, the rest are conditioning
// inputs. Transitions are row-major over the input tuple with the last axis
// (y1, y2) flattened y1-major.
struct DiscreteTwoOutputChannel {
  int mu1 = 0;
  int mu2 = 0;
  std::vector<int> input_alphabets;   // size mu1 + mu2
  int y1_size = 0;
  int y2_size = 0;
  std::vector<double> transitions;

  int input_count() const { return mu1 + mu2; }
  int input_tuple_count() const;
  double prob(int flat_input, int y1, int y2) const {
    return transitions[(static_cast<size_t>(flat_input) * y1_size + y1) * y2_size + y2];
  }

  static DiscreteTwoOutputChannel create(int mu1, int mu2,
                                         std::vector<int> input_alphabets,
                                         int y1_size, int y2_size,
                                         std::vector<double> transitions,
                                         double tol = kConstructTol);
};

// Broadcast channel as K per-receiver marginals P(y_k | x).
struct DiscreteBroadcastChannel {
  int x_size = 0;
  std::vector<StochasticMatrix> marginals;

  int receivers() const { return static_cast<int>(marginals.size()); }

  static DiscreteBroadcastChannel create(int x_size,
                                         std::vector<StochasticMatrix> marginals);
};

struct RateVector {
  std::vector<double> rates;   // bits per channel use, length K

  static RateVector create(std::vector<double> rates);
};

// Each validate returns the list of violated invariants (empty on success);
// entries name the offending field. Pure, idempotent.
std::vector<std::string> validate(const GaussianIC& ic);
std::vector<std::string> validate(const TwoOutputSystem& sys);
std::vector<std::string> validate(const DiscretePMF& pmf, double tol = kConstructTol);
std::vector<std::string> validate(const StochasticMatrix& m, double tol = kConstructTol);
std::vector<std::string> validate(const DiscreteTwoOutputChannel& ch, double tol = kConstructTol);
std::vector<std::string> validate(const DiscreteBroadcastChannel& bc, double tol = kConstructTol);
std::vector<std::string> validate(const RateVector& r);

// Rescales an arbitrary gain/noise/power description into standard form
// (unit direct gains, unit noise variances). Requires nonzero direct gains
// and positive noise variances; per-receiver SNR terms are preserved.
GaussianIC standardize(const std::vector<std::vector<double>>& gains,
                       const std::vector<double>& noise_vars,
                       const std::vector<double>& powers);

}  // namespace icregime::model
