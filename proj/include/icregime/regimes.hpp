#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "icregime/model.hpp"

namespace icregime::regimes {

// One strong-interference inequality in symbolic form:
//   I(X_lhs; Y_smaller | X_cond) <= I(X_lhs; Y_larger | X_cond)
// quantified over all input laws that factor into the listed independence
// blocks. User indices are 1-based throughout.
struct MIInequality {
  std::vector<int> lhs_inputs;                    // sorted ascending
  std::vector<int> conditioning;                  // sorted ascending
  int smaller_receiver = 0;
  int larger_receiver = 0;
  std::vector<std::vector<int>> factorization;    // blocks sorted, by first element

  bool operator==(const MIInequality&) const = default;
};

struct ConditionSet {
  int users = 0;
  std::string label;
  std::vector<MIInequality> inequalities;

  bool operator==(const ConditionSet&) const = default;
};

// The K-inequality cyclic family. Shift 0 is the canonical set: row r
// (1-based) states I(X_{all but r}; Y_{r-1} | X_r) <= I(X_{all but r}; Y_r | X_r)
// with receiver 0 wrapping to K and the lhs block jointly distributed.
// A nonzero shift relabels every user index by i -> ((i-1+shift) mod K)+1.
ConditionSet generate_kuser_regime(int users, int shift);

enum class ThreeUserVariant { kRegime41, kRegime46 };

// The two explicitly printed 3-user condition sets: the 3-inequality
// joint-block set (equal to the cyclic shift-0 family at K=3) and the
// 4-inequality fully-product variant.
ConditionSet generate_3user_variant(ThreeUserVariant which);

struct RatioCheckResult {
  bool pass = false;
  std::optional<double> alpha;   // present whenever the defined ratios agree
  std::string reason;            // empty on pass
};

// Checks that the mu1 leading coefficient ratios a_i/b_i share a common
// value alpha with |alpha| <= 1. Pairs with a_i = b_i = 0 are unconstrained
// and skipped; b_i = 0 with a_i != 0 is an undefined ratio and fails. If no
// ratio is constrained, alpha defaults to 0 (any |alpha| <= 1 works).
RatioCheckResult ratio_condition_check(const model::TwoOutputSystem& sys);

struct DegradedConstruction {
  double alpha = 0.0;
  std::vector<double> x_coeffs;   // one correction per conditioning input
  double noise_scale = 0.0;       // sqrt(1 - alpha^2)
};

// Builds the synthetic output alpha*Y2 + sum_j c_j X_j + noise_scale*Z~ whose
// conditional law given all inputs matches Y1 exactly. The correction for
// conditioning input j is c_j = a_j - alpha*b_j (the sign that makes the
// conditional mean match). Throws if ratio_condition_check fails.
DegradedConstruction degraded_equivalent(const model::TwoOutputSystem& sys);

// The two-output Gaussian system implied by one inequality of a condition
// set: coefficient vector a is the smaller receiver's gain row, b the larger
// receiver's, columns ordered as (sorted lhs inputs, conditioning inputs).
model::TwoOutputSystem chain_system(const model::GaussianIC& ic,
                                    const MIInequality& ineq);

struct ChainFailure {
  int chain = 0;         // 1-based inequality index within the set
  std::string reason;
};

struct KUserCheckResult {
  bool pass = false;
  std::optional<std::vector<double>> alphas;   // chain alphas when all defined
  std::vector<ChainFailure> failures;
};

// Closed-form gain-ratio check for the cyclic K-user regime: runs
// ratio_condition_check over the K chain systems of the shifted condition
// set. Passes iff every chain passes.
KUserCheckResult gaussian_kuser_check(const model::GaussianIC& ic, int shift);

struct ThreeUserCheckResult {
  bool pass = false;
  std::array<double, 3> witness{};                  // (a13, a21, a32)
  std::optional<std::array<double, 3>> alphas;      // (1/a13, 1/a21, 1/a32)
  std::vector<std::string> failures;
};

// Direct 3-user form: |a13|,|a21|,|a32| >= 1 plus the product identities
// a12 = a13*a32, a31 = a21*a32, a23 = a21*a13. Agrees with
// gaussian_kuser_check at shift 0 (tested property).
ThreeUserCheckResult gaussian_3user_check(const model::GaussianIC& ic);

struct Variant46CheckResult {
  bool pass = false;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::vector<std::string> failures;
  std::string note;
};

// Gain conditions for the fully-product 3-user variant, checked literally as
// printed: |a23| >= 1; a21 = 1/a12 = a23/a13 = alpha with |alpha| = 1;
// a21/a31 = 1/a32 = beta with |beta| <= 1. The |alpha| equality is suspect
// (the companion pattern suggests <=); the result's note flags this rather
// than silently relaxing it.
Variant46CheckResult gaussian_variant46_check(const model::GaussianIC& ic);

}  // namespace icregime::regimes
