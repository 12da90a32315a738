#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "icregime/model.hpp"

namespace icregime::regions {

inline constexpr double kMembershipTol = 1e-12;
inline constexpr double kVertexDedupTol = 1e-9;
inline constexpr double kBoundsAgreeTol = 1e-9;
inline constexpr int kMaxRegionUsers = 10;

// Rate polytope { r >= 0 : sum_{i in S} r_i <= bound(S) for every nonempty
// subset S }. Subsets are bitmasks with bit i-1 for user i; bounds are
// indexed by mask (entry 0 unused). The per-subset provenance records which
// receivers attained the min.
struct RegionSpec {
  int users = 0;
  std::vector<double> bounds;                       // size 1 << users
  std::vector<std::vector<int>> argmin_receivers;   // 1-based, per mask

  double bound(std::uint32_t mask) const { return bounds[mask]; }
  std::uint32_t full_mask() const { return (1u << users) - 1; }
};

// Joint-decoding region: every subset bound is the min over ALL receivers of
// the Gaussian MAC bound, independent full-power inputs, constant
// time-sharing (that choice simultaneously maximizes every MAC bound, so the
// union over input laws adds nothing here).
RegionSpec region_full(const model::GaussianIC& ic);

// Reduced form: the min runs over receivers inside S only. At K = 3 this is
// the printed simplification; for larger K the j-in-S pattern is the
// generalization validated numerically by redundancy_check.
RegionSpec region_simplified(const model::GaussianIC& ic);

struct MembershipResult {
  bool inside = false;
  std::vector<std::uint32_t> violated;   // failing subset masks, ascending
};

MembershipResult membership(const RegionSpec& region, const model::RateVector& r);

// min over receivers of 0.5*log2(1 + row SNR); equals the full-set bound of
// region_full.
double sum_capacity(const model::GaussianIC& ic);

// Support function max { direction . r : r in region }. Direction entries
// must be >= 0 and not all zero. Solved by vertex enumeration for K <= 3 and
// a dense simplex for K <= 10.
double support(const RegionSpec& region, const std::vector<double>& direction);

// All vertices of the polytope, K <= 3: K-subsets of active constraints
// (subset rows plus coordinate planes), solve, filter by feasibility,
// dedup within kVertexDedupTol. Sorted lexicographically.
std::vector<model::RateVector> vertices(const RegionSpec& region);

struct RedundancyResult {
  bool equivalent = false;
  std::optional<model::RateVector> counterexample;
  int bounds_compared = 0;
  int points_tested = 0;
};

// Tests region_full == region_simplified for a channel in the declared
// cyclic regime: exact subset-bound comparison at kBoundsAgreeTol plus
// cross-membership on 1000 Halton points scaled to the bounding box.
// Throws if the channel fails gaussian_kuser_check(shift).
RedundancyResult redundancy_check(const model::GaussianIC& ic, int shift);

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

// 2-D cross-section with K-2 coordinates pinned (1-based indices, values
// >= 0). Returns the boundary polygon counterclockwise; empty when the
// slice is infeasible.
std::vector<Point2> slice(const RegionSpec& region,
                          const std::vector<std::pair<int, double>>& fixed);

// Subset mask helpers (1-based user lists).
std::vector<int> mask_to_users(std::uint32_t mask);
std::uint32_t users_to_mask(const std::vector<int>& users, int k);

}  // namespace icregime::regions
