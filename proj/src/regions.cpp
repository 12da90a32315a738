#include "icregime/regions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "icregime/errors.hpp"
#include "icregime/measures.hpp"
#include "icregime/regimes.hpp"
#include "icregime/rng.hpp"
#include "icregime/simplex.hpp"

namespace icregime::regions {

namespace {

constexpr double kArgminTieTol = 1e-12;

RegionSpec build_region(const model::GaussianIC& ic, bool receivers_in_subset_only) {
  auto bad = validate(ic);
  if (!bad.empty()) throw std::invalid_argument(bad.front());
  if (ic.users > kMaxRegionUsers)
    throw std::invalid_argument("region: K capped at " + std::to_string(kMaxRegionUsers));

  RegionSpec region;
  region.users = ic.users;
  const std::uint32_t n_masks = 1u << ic.users;
  region.bounds.assign(n_masks, 0.0);
  region.argmin_receivers.assign(n_masks, {});

  for (std::uint32_t mask = 1; mask < n_masks; ++mask) {
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> values(ic.users);
    for (int j = 1; j <= ic.users; ++j) {
      if (receivers_in_subset_only && !(mask & (1u << (j - 1)))) {
        values[j - 1] = std::numeric_limits<double>::quiet_NaN();
        continue;
      }
      values[j - 1] = measures::gaussian_mac_mi(ic, j, mask);
      best = std::min(best, values[j - 1]);
    }
    region.bounds[mask] = best;
    for (int j = 1; j <= ic.users; ++j)
      if (!std::isnan(values[j - 1]) && values[j - 1] <= best + kArgminTieTol)
        region.argmin_receivers[mask].push_back(j);
  }
  return region;
}

void check_region(const RegionSpec& region) {
  if (region.users < 1 || region.users > kMaxRegionUsers)
    throw std::invalid_argument("region: users outside [1, " +
                                std::to_string(kMaxRegionUsers) + "]");
  if (region.bounds.size() != (1u << region.users))
    throw std::invalid_argument("region: bounds size mismatch");
  for (std::uint32_t mask = 1; mask < region.bounds.size(); ++mask)
    if (!(region.bounds[mask] >= 0.0))
      throw std::invalid_argument("region: negative subset bound");
}

// rows of the H-representation: subset rows (indicator, bound) then
// coordinate rows (-e_i, 0)
struct HRep {
  std::vector<std::vector<double>> a;
  std::vector<double> b;
};

HRep h_representation(const RegionSpec& region) {
  const int k = region.users;
  HRep h;
  for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
    std::vector<double> row(k, 0.0);
    for (int i = 0; i < k; ++i)
      if (mask & (1u << i)) row[i] = 1.0;
    h.a.push_back(std::move(row));
    h.b.push_back(region.bounds[mask]);
  }
  for (int i = 0; i < k; ++i) {
    std::vector<double> row(k, 0.0);
    row[i] = -1.0;
    h.a.push_back(std::move(row));
    h.b.push_back(0.0);
  }
  return h;
}

bool solve_square(std::vector<std::vector<double>> m, std::vector<double> rhs,
                  std::vector<double>& out) {
  const int n = static_cast<int>(rhs.size());
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    if (std::abs(m[piv][col]) < 1e-10) return false;
    std::swap(m[piv], m[col]);
    std::swap(rhs[piv], rhs[col]);
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = m[r][col] / m[col][col];
      if (f == 0.0) continue;
      for (int c = col; c < n; ++c) m[r][c] -= f * m[col][c];
      rhs[r] -= f * rhs[col];
    }
  }
  out.resize(n);
  for (int i = 0; i < n; ++i) out[i] = rhs[i] / m[i][i];
  return true;
}

bool feasible(const HRep& h, const std::vector<double>& point, double tol) {
  for (size_t r = 0; r < h.a.size(); ++r) {
    double lhs = 0.0;
    for (size_t i = 0; i < point.size(); ++i) lhs += h.a[r][i] * point[i];
    if (lhs > h.b[r] + tol) return false;
  }
  return true;
}

std::vector<std::vector<double>> enumerate_vertices(const HRep& h, int dim) {
  const int rows = static_cast<int>(h.a.size());
  std::vector<std::vector<double>> verts;

  // all dim-subsets of rows
  std::vector<int> idx(dim);
  for (int i = 0; i < dim; ++i) idx[i] = i;
  for (;;) {
    std::vector<std::vector<double>> m(dim);
    std::vector<double> rhs(dim);
    for (int i = 0; i < dim; ++i) {
      m[i] = h.a[idx[i]];
      rhs[i] = h.b[idx[i]];
    }
    std::vector<double> point;
    if (solve_square(std::move(m), std::move(rhs), point) &&
        feasible(h, point, kMembershipTol)) {
      for (auto& c : point)
        if (std::abs(c) <= 1.1e-12) c = 0.0;  // snap round-off onto the axes
      bool dup = false;
      for (const auto& v : verts) {
        double d = 0.0;
        for (int i = 0; i < dim; ++i) d = std::max(d, std::abs(v[i] - point[i]));
        if (d <= kVertexDedupTol) { dup = true; break; }
      }
      if (!dup) verts.push_back(std::move(point));
    }
    // next combination
    int i = dim - 1;
    while (i >= 0 && idx[i] == rows - dim + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < dim; ++j) idx[j] = idx[j - 1] + 1;
  }
  std::sort(verts.begin(), verts.end());
  return verts;
}

}  // namespace

RegionSpec region_full(const model::GaussianIC& ic) { return build_region(ic, false); }

RegionSpec region_simplified(const model::GaussianIC& ic) {
  return build_region(ic, true);
}

MembershipResult membership(const RegionSpec& region, const model::RateVector& r) {
  check_region(region);
  if (static_cast<int>(r.rates.size()) != region.users)
    throw std::invalid_argument("membership: rate vector dimension mismatch");

  MembershipResult result;
  result.inside = true;
  for (std::uint32_t mask = 1; mask < (1u << region.users); ++mask) {
    double sum = 0.0;
    for (int i = 0; i < region.users; ++i)
      if (mask & (1u << i)) sum += r.rates[i];
    if (sum > region.bounds[mask] + kMembershipTol) {
      result.inside = false;
      result.violated.push_back(mask);
    }
  }
  return result;
}

double sum_capacity(const model::GaussianIC& ic) {
  auto bad = validate(ic);
  if (!bad.empty()) throw std::invalid_argument(bad.front());
  double best = std::numeric_limits<double>::infinity();
  const std::uint32_t full = (1u << ic.users) - 1;
  for (int j = 1; j <= ic.users; ++j)
    best = std::min(best, measures::gaussian_mac_mi(ic, j, full));
  return best;
}

std::vector<model::RateVector> vertices(const RegionSpec& region) {
  check_region(region);
  if (region.users > 3)
    throw std::invalid_argument("vertex enumeration capped at K=3");
  const HRep h = h_representation(region);
  std::vector<model::RateVector> out;
  for (auto& v : enumerate_vertices(h, region.users))
    out.push_back(model::RateVector::create(std::move(v)));
  return out;
}

double support(const RegionSpec& region, const std::vector<double>& direction) {
  check_region(region);
  if (static_cast<int>(direction.size()) != region.users)
    throw std::invalid_argument("support: direction dimension mismatch");
  bool all_zero = true;
  for (double d : direction) {
    if (d < 0.0)
      throw std::invalid_argument("support: negative direction entries");
    if (d != 0.0) all_zero = false;
  }
  if (all_zero) throw std::invalid_argument("support: direction must be nonzero");

  if (region.users <= 3) {
    double best = 0.0;
    for (const auto& v : vertices(region)) {
      double val = 0.0;
      for (int i = 0; i < region.users; ++i) val += direction[i] * v.rates[i];
      best = std::max(best, val);
    }
    return best;
  }

  // dense simplex over the 2^K-1 subset rows; r >= 0 is implicit
  HRep h = h_representation(region);
  h.a.resize((1u << region.users) - 1);  // drop coordinate rows, simplex keeps x >= 0
  h.b.resize(h.a.size());
  return lp::maximize(h.a, h.b, direction).value;
}

RedundancyResult redundancy_check(const model::GaussianIC& ic, int shift) {
  const auto check = regimes::gaussian_kuser_check(ic, shift);
  if (!check.pass)
    throw std::invalid_argument("ic not in declared regime (shift " +
                                std::to_string(shift) + ")");

  const RegionSpec full = region_full(ic);
  const RegionSpec simplified = region_simplified(ic);

  RedundancyResult result;
  result.equivalent = true;
  for (std::uint32_t mask = 1; mask < (1u << ic.users); ++mask) {
    ++result.bounds_compared;
    if (std::abs(full.bounds[mask] - simplified.bounds[mask]) > kBoundsAgreeTol)
      result.equivalent = false;
  }

  // cross-membership probe on a deterministic low-discrepancy cloud scaled
  // to the simplified region's bounding box (the larger of the two)
  const auto bases = rng::halton_bases(ic.users);
  for (int p = 1; p <= 1000; ++p) {
    std::vector<double> rates(ic.users);
    for (int i = 0; i < ic.users; ++i)
      rates[i] = rng::halton(static_cast<std::uint64_t>(p), bases[i]) *
                 simplified.bounds[1u << i] * 1.05;
    const model::RateVector rv = model::RateVector::create(std::move(rates));
    ++result.points_tested;
    if (membership(full, rv).inside != membership(simplified, rv).inside) {
      result.equivalent = false;
      if (!result.counterexample) result.counterexample = rv;
    }
  }
  return result;
}

std::vector<Point2> slice(const RegionSpec& region,
                          const std::vector<std::pair<int, double>>& fixed) {
  check_region(region);
  const int k = region.users;
  if (static_cast<int>(fixed.size()) != k - 2)
    throw std::invalid_argument("slice: exactly K-2 coordinates must be fixed");

  std::vector<double> fixed_value(k, -1.0);
  for (auto [coord, value] : fixed) {
    if (coord < 1 || coord > k)
      throw std::invalid_argument("slice: coordinate index out of range");
    if (fixed_value[coord - 1] >= 0.0)
      throw std::invalid_argument("slice: coordinate fixed twice");
    if (value < 0.0) throw std::invalid_argument("slice: fixed values must be >= 0");
    fixed_value[coord - 1] = value;
  }
  std::vector<int> free_coords;
  for (int i = 0; i < k; ++i)
    if (fixed_value[i] < 0.0) free_coords.push_back(i);

  // project every subset row onto the two free coordinates
  HRep h;
  for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
    double rhs = region.bounds[mask];
    std::vector<double> row(2, 0.0);
    for (int i = 0; i < k; ++i) {
      if (!(mask & (1u << i))) continue;
      if (i == free_coords[0]) row[0] = 1.0;
      else if (i == free_coords[1]) row[1] = 1.0;
      else rhs -= fixed_value[i];
    }
    if (row[0] == 0.0 && row[1] == 0.0) {
      if (rhs < -kMembershipTol) return {};  // fixed part alone infeasible
      continue;
    }
    h.a.push_back(std::move(row));
    h.b.push_back(rhs);
  }
  for (int i = 0; i < 2; ++i) {
    std::vector<double> row(2, 0.0);
    row[i] = -1.0;
    h.a.push_back(std::move(row));
    h.b.push_back(0.0);
  }

  auto verts = enumerate_vertices(h, 2);
  if (verts.empty()) return {};

  std::vector<Point2> pts;
  pts.reserve(verts.size());
  for (const auto& v : verts) pts.push_back({v[0], v[1]});

  Point2 centroid{0.0, 0.0};
  for (const auto& p : pts) {
    centroid.x += p.x;
    centroid.y += p.y;
  }
  centroid.x /= static_cast<double>(pts.size());
  centroid.y /= static_cast<double>(pts.size());
  std::sort(pts.begin(), pts.end(), [&](const Point2& p, const Point2& q) {
    return std::atan2(p.y - centroid.y, p.x - centroid.x) <
           std::atan2(q.y - centroid.y, q.x - centroid.x);
  });
  return pts;
}

std::vector<int> mask_to_users(std::uint32_t mask) {
  std::vector<int> users;
  for (int i = 0; mask; ++i, mask >>= 1)
    if (mask & 1u) users.push_back(i + 1);
  return users;
}

std::uint32_t users_to_mask(const std::vector<int>& users, int k) {
  std::uint32_t mask = 0;
  for (int u : users) {
    if (u < 1 || u > k) throw std::invalid_argument("subset user index out of range");
    mask |= 1u << (u - 1);
  }
  return mask;
}

}  // namespace icregime::regions
