#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "icregime/model.hpp"

namespace icregime::measures {

struct Axis {
  std::string label;
  int size = 0;
};

// Joint law over a list of named finite axes; probabilities stored flat in
// row-major order (first axis slowest). All rates and entropies in bits.
class JointPMF {
 public:
  JointPMF(std::vector<Axis> axes, std::vector<double> probs,
           double tol = model::kConstructTol);

  const std::vector<Axis>& axes() const { return axes_; }
  const std::vector<double>& probs() const { return probs_; }
  size_t cell_count() const { return probs_.size(); }

  // Marginal over the given axis indices; remaining axes keep their
  // original relative order.
  JointPMF marginal(const std::vector<int>& keep_axes) const;

  // -sum p log2 p over cells in storage order (fixed summation order keeps
  // results bit-reproducible).
  double entropy_bits() const;

 private:
  std::vector<Axis> axes_;
  std::vector<double> probs_;
};

// Entropy of a bare probability vector, 0*log 0 := 0.
double entropy(std::span<const double> probs);
double entropy(const model::DiscretePMF& pmf);

// I(A; B | C) in bits via the entropy decomposition
// H(A,C) + H(B,C) - H(A,B,C) - H(C). Groups are axis indices into `joint`;
// they must be pairwise disjoint. Axes in none of the groups are
// marginalized out. Values within round-off below zero are clamped to 0.
double conditional_mutual_information(const JointPMF& joint,
                                      const std::vector<int>& group_a,
                                      const std::vector<int>& group_b,
                                      const std::vector<int>& group_c);

// Gaussian MAC bound at receiver j (1-based) for transmitter subset S:
// 0.5*log2(1 + sum_{i in S} a_{ji}^2 P_i), independent full-power inputs.
double gaussian_mac_mi(const model::GaussianIC& ic, int receiver,
                       const std::vector<int>& subset);
// Mask variant: bit i-1 set means user i belongs to S.
double gaussian_mac_mi(const model::GaussianIC& ic, int receiver,
                       std::uint32_t subset_mask);

}  // namespace icregime::measures
