#include "icregime/measures.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace icregime::measures {

namespace {

constexpr double kClampTol = 1e-12;

double clamp_mi(double v) {
  if (v < 0.0 && v > -kClampTol) return 0.0;
  return v;
}

}  // namespace

JointPMF::JointPMF(std::vector<Axis> axes, std::vector<double> probs, double tol)
    : axes_(std::move(axes)), probs_(std::move(probs)) {
  size_t expect = 1;
  for (const auto& ax : axes_) {
    if (ax.size < 1) throw std::invalid_argument("axes: size must be >= 1");
    expect *= static_cast<size_t>(ax.size);
  }
  if (probs_.size() != expect)
    throw std::invalid_argument("probs: storage size does not match axes");
  double mass = 0.0;
  for (double p : probs_) {
    if (!std::isfinite(p) || p < 0.0)
      throw std::invalid_argument("probs: negative or non-finite entry");
    mass += p;
  }
  if (std::abs(mass - 1.0) > tol)
    throw std::invalid_argument("probs: total mass " + std::to_string(mass) + " != 1");
}

JointPMF JointPMF::marginal(const std::vector<int>& keep_axes) const {
  const int n = static_cast<int>(axes_.size());
  std::vector<bool> keep(n, false);
  for (int a : keep_axes) {
    if (a < 0 || a >= n) throw std::invalid_argument("marginal: axis index out of range");
    keep[a] = true;
  }
  std::vector<Axis> out_axes;
  for (int a = 0; a < n; ++a)
    if (keep[a]) out_axes.push_back(axes_[a]);

  // stride of each kept axis in the marginal tensor
  std::vector<size_t> out_stride(n, 0);
  size_t out_cells = 1;
  for (int a = n - 1; a >= 0; --a) {
    if (!keep[a]) continue;
    out_stride[a] = out_cells;
    out_cells *= static_cast<size_t>(axes_[a].size);
  }

  std::vector<double> out(out_cells, 0.0);
  std::vector<int> idx(n, 0);
  size_t out_pos = 0;
  for (size_t cell = 0; cell < probs_.size(); ++cell) {
    out[out_pos] += probs_[cell];
    // advance the mixed-radix counter and the projected position together
    for (int a = n - 1; a >= 0; --a) {
      if (++idx[a] < axes_[a].size) {
        if (keep[a]) out_pos += out_stride[a];
        break;
      }
      idx[a] = 0;
      if (keep[a]) out_pos -= out_stride[a] * static_cast<size_t>(axes_[a].size - 1);
    }
  }
  return JointPMF(std::move(out_axes), std::move(out));
}

double JointPMF::entropy_bits() const { return entropy(probs_); }

double entropy(std::span<const double> probs) {
  double h = 0.0;
  for (double p : probs)
    if (p > 0.0) h -= p * std::log2(p);
  return h;
}

double entropy(const model::DiscretePMF& pmf) { return entropy(std::span(pmf.probs)); }

double conditional_mutual_information(const JointPMF& joint,
                                      const std::vector<int>& group_a,
                                      const std::vector<int>& group_b,
                                      const std::vector<int>& group_c) {
  const int n = static_cast<int>(joint.axes().size());
  std::vector<int> owner(n, -1);
  auto claim = [&](const std::vector<int>& group, int tag) {
    for (int a : group) {
      if (a < 0 || a >= n)
        throw std::invalid_argument("axis index out of range");
      if (owner[a] != -1) throw std::invalid_argument("axis groups not disjoint");
      owner[a] = tag;
    }
  };
  claim(group_a, 0);
  claim(group_b, 1);
  claim(group_c, 2);

  auto collect = [&](std::initializer_list<int> tags) {
    std::vector<int> axes;
    for (int a = 0; a < n; ++a)
      for (int t : tags)
        if (owner[a] == t) axes.push_back(a);
    return axes;
  };

  const double h_ac = joint.marginal(collect({0, 2})).entropy_bits();
  const double h_bc = joint.marginal(collect({1, 2})).entropy_bits();
  const double h_abc = joint.marginal(collect({0, 1, 2})).entropy_bits();
  const double h_c = joint.marginal(collect({2})).entropy_bits();
  return clamp_mi(h_ac + h_bc - h_abc - h_c);
}

double gaussian_mac_mi(const model::GaussianIC& ic, int receiver,
                       std::uint32_t subset_mask) {
  if (receiver < 1 || receiver > ic.users)
    throw std::invalid_argument("receiver index out of range");
  if (subset_mask == 0) throw std::invalid_argument("empty subset");
  if (subset_mask >> ic.users)
    throw std::invalid_argument("subset contains users beyond K");
  double snr = 0.0;
  for (int i = 0; i < ic.users; ++i)
    if (subset_mask & (1u << i)) {
      const double g = ic.gains[receiver - 1][i];
      snr += g * g * ic.powers[i];
    }
  return 0.5 * std::log2(1.0 + snr);
}

double gaussian_mac_mi(const model::GaussianIC& ic, int receiver,
                       const std::vector<int>& subset) {
  std::uint32_t mask = 0;
  for (int u : subset) {
    if (u < 1 || u > ic.users)
      throw std::invalid_argument("subset contains user index out of range");
    mask |= 1u << (u - 1);
  }
  return gaussian_mac_mi(ic, receiver, mask);
}

}  // namespace icregime::measures
