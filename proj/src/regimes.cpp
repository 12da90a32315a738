#include "icregime/regimes.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace icregime::regimes {

namespace {

constexpr double kRatioTol = 1e-9;     // relative, gain identities
constexpr double kAlphaSlack = 1e-12;  // absolute, |alpha| <= 1 test

bool ratios_agree(double r0, double r1) {
  const double scale = std::max({1.0, std::abs(r0), std::abs(r1)});
  return std::abs(r0 - r1) <= kRatioTol * scale;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

void sort_blocks(std::vector<std::vector<int>>& blocks) {
  for (auto& b : blocks) std::sort(b.begin(), b.end());
  std::sort(blocks.begin(), blocks.end(),
            [](const auto& x, const auto& y) { return x.front() < y.front(); });
}

}  // namespace

ConditionSet generate_kuser_regime(int users, int shift) {
  if (users < 2) throw std::invalid_argument("generate_kuser_regime: K must be >= 2");
  if (shift < 0 || shift >= users)
    throw std::invalid_argument("generate_kuser_regime: shift must be in [0, K)");

  auto relabel = [&](int u) { return (u - 1 + shift) % users + 1; };

  ConditionSet set;
  set.users = users;
  set.label = "cyclic-" + std::to_string(shift);
  for (int row = 1; row <= users; ++row) {
    MIInequality ineq;
    for (int u = 1; u <= users; ++u)
      if (u != row) ineq.lhs_inputs.push_back(relabel(u));
    ineq.conditioning = {relabel(row)};
    ineq.smaller_receiver = relabel(row == 1 ? users : row - 1);
    ineq.larger_receiver = relabel(row);
    ineq.factorization = {ineq.lhs_inputs, ineq.conditioning};
    std::sort(ineq.lhs_inputs.begin(), ineq.lhs_inputs.end());
    sort_blocks(ineq.factorization);
    set.inequalities.push_back(std::move(ineq));
  }
  return set;
}

ConditionSet generate_3user_variant(ThreeUserVariant which) {
  if (which == ThreeUserVariant::kRegime41) {
    ConditionSet set = generate_kuser_regime(3, 0);
    set.label = "3user-variant-41";
    return set;
  }

  ConditionSet set;
  set.users = 3;
  set.label = "3user-variant-46";
  const std::vector<std::vector<int>> product = {{1}, {2}, {3}};
  auto add = [&](std::vector<int> lhs, std::vector<int> cond, int smaller, int larger) {
    MIInequality ineq;
    ineq.lhs_inputs = std::move(lhs);
    ineq.conditioning = std::move(cond);
    ineq.smaller_receiver = smaller;
    ineq.larger_receiver = larger;
    ineq.factorization = product;
    set.inequalities.push_back(std::move(ineq));
  };
  add({3}, {1, 2}, 3, 2);
  add({2, 3}, {1}, 2, 1);
  add({1, 3}, {2}, 1, 2);
  add({1, 2}, {3}, 2, 3);
  return set;
}

RatioCheckResult ratio_condition_check(const model::TwoOutputSystem& sys) {
  auto bad = validate(sys);
  if (!bad.empty()) throw std::invalid_argument(bad.front());

  RatioCheckResult result;
  std::optional<double> alpha;
  for (int i = 0; i < sys.mu1; ++i) {
    const double ai = sys.a[i];
    const double bi = sys.b[i];
    if (bi == 0.0) {
      if (ai == 0.0) continue;  // input absent at both outputs, unconstrained
      result.pass = false;
      result.reason = "undefined ratio at input " + std::to_string(i + 1) +
                      " (a = " + fmt(ai) + ", b = 0)";
      return result;
    }
    const double r = ai / bi;
    if (!alpha) {
      alpha = r;
    } else if (!ratios_agree(*alpha, r)) {
      result.pass = false;
      result.reason = "ratios disagree: " + fmt(*alpha) + " vs " + fmt(r) +
                      " at input " + std::to_string(i + 1);
      return result;
    }
  }
  if (!alpha) alpha = 0.0;  // no constrained ratio; any |alpha| <= 1 works
  result.alpha = alpha;
  if (std::abs(*alpha) > 1.0 + kAlphaSlack) {
    result.pass = false;
    result.reason = "|alpha| = " + fmt(std::abs(*alpha)) + " exceeds 1";
    return result;
  }
  result.pass = true;
  return result;
}

DegradedConstruction degraded_equivalent(const model::TwoOutputSystem& sys) {
  const RatioCheckResult check = ratio_condition_check(sys);
  if (!check.pass)
    throw std::invalid_argument("system not ratio-degraded: " + check.reason);

  DegradedConstruction out;
  out.alpha = *check.alpha;
  out.x_coeffs.resize(sys.mu2);
  for (int j = 0; j < sys.mu2; ++j) {
    const size_t idx = static_cast<size_t>(sys.mu1) + j;
    out.x_coeffs[j] = sys.a[idx] - out.alpha * sys.b[idx];
  }
  out.noise_scale = std::sqrt(std::max(0.0, 1.0 - out.alpha * out.alpha));
  return out;
}

model::TwoOutputSystem chain_system(const model::GaussianIC& ic,
                                    const MIInequality& ineq) {
  std::vector<double> a, b;
  a.reserve(ic.users);
  b.reserve(ic.users);
  for (int u : ineq.lhs_inputs) {
    a.push_back(ic.gains[ineq.smaller_receiver - 1][u - 1]);
    b.push_back(ic.gains[ineq.larger_receiver - 1][u - 1]);
  }
  for (int u : ineq.conditioning) {
    a.push_back(ic.gains[ineq.smaller_receiver - 1][u - 1]);
    b.push_back(ic.gains[ineq.larger_receiver - 1][u - 1]);
  }
  return model::TwoOutputSystem::create(static_cast<int>(ineq.lhs_inputs.size()),
                                        static_cast<int>(ineq.conditioning.size()),
                                        std::move(a), std::move(b));
}

KUserCheckResult gaussian_kuser_check(const model::GaussianIC& ic, int shift) {
  auto bad = validate(ic);
  if (!bad.empty()) throw std::invalid_argument(bad.front());

  const ConditionSet set = generate_kuser_regime(ic.users, shift);
  KUserCheckResult result;
  result.pass = true;
  std::vector<double> alphas;
  bool all_defined = true;
  for (size_t i = 0; i < set.inequalities.size(); ++i) {
    const RatioCheckResult chain = ratio_condition_check(
        chain_system(ic, set.inequalities[i]));
    if (chain.alpha) {
      alphas.push_back(*chain.alpha);
    } else {
      all_defined = false;
    }
    if (!chain.pass) {
      result.pass = false;
      result.failures.push_back({static_cast<int>(i + 1), chain.reason});
    }
  }
  if (all_defined) result.alphas = std::move(alphas);
  return result;
}

ThreeUserCheckResult gaussian_3user_check(const model::GaussianIC& ic) {
  auto bad = validate(ic);
  if (!bad.empty()) throw std::invalid_argument(bad.front());
  if (ic.users != 3)
    throw std::invalid_argument("gaussian_3user_check: K must equal 3");

  const double a12 = ic.gains[0][1], a13 = ic.gains[0][2];
  const double a21 = ic.gains[1][0], a23 = ic.gains[1][2];
  const double a31 = ic.gains[2][0], a32 = ic.gains[2][1];

  ThreeUserCheckResult result;
  result.witness = {a13, a21, a32};

  auto magnitude = [&](double v, const char* name) {
    if (std::abs(v) < 1.0 - kRatioTol)
      result.failures.push_back(std::string("|") + name + "| = " +
                                fmt(std::abs(v)) + " below 1");
  };
  magnitude(a13, "a13");
  magnitude(a21, "a21");
  magnitude(a32, "a32");

  auto product = [&](double lhs, double rhs, const char* what) {
    const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
    if (std::abs(lhs - rhs) > kRatioTol * scale)
      result.failures.push_back(std::string(what) + ": " + fmt(lhs) +
                                " != " + fmt(rhs));
  };
  product(a12, a13 * a32, "a12 = a13*a32");
  product(a31, a21 * a32, "a31 = a21*a32");
  product(a23, a21 * a13, "a23 = a21*a13");

  if (a13 != 0.0 && a21 != 0.0 && a32 != 0.0)
    result.alphas = {{1.0 / a13, 1.0 / a21, 1.0 / a32}};
  result.pass = result.failures.empty();
  return result;
}

Variant46CheckResult gaussian_variant46_check(const model::GaussianIC& ic) {
  auto bad = validate(ic);
  if (!bad.empty()) throw std::invalid_argument(bad.front());
  if (ic.users != 3)
    throw std::invalid_argument("gaussian_variant46_check: K must equal 3");

  const double a12 = ic.gains[0][1], a13 = ic.gains[0][2];
  const double a21 = ic.gains[1][0], a23 = ic.gains[1][2];
  const double a31 = ic.gains[2][0], a32 = ic.gains[2][1];

  Variant46CheckResult result;
  result.note = "checked |alpha| = 1 as printed; the companion condition "
                "pattern suggests |alpha| <= 1 may be intended";

  if (std::abs(a23) < 1.0 - kRatioTol)
    result.failures.push_back("|a23| = " + fmt(std::abs(a23)) + " below 1");

  // alpha chain: a21 = 1/a12 = a23/a13
  if (a12 == 0.0) {
    result.failures.push_back("undefined ratio 1/a12 (a12 = 0)");
  } else if (a13 == 0.0 && a23 != 0.0) {
    result.failures.push_back("undefined ratio a23/a13 (a13 = 0)");
  } else {
    const double alpha = a21;
    result.alpha = alpha;
    if (!ratios_agree(alpha, 1.0 / a12))
      result.failures.push_back("alpha chain broken: a21 = " + fmt(a21) +
                                " vs 1/a12 = " + fmt(1.0 / a12));
    if (a13 != 0.0 && !ratios_agree(alpha, a23 / a13))
      result.failures.push_back("alpha chain broken: a21 = " + fmt(a21) +
                                " vs a23/a13 = " + fmt(a23 / a13));
    if (std::abs(std::abs(alpha) - 1.0) > kRatioTol)
      result.failures.push_back("|alpha| = " + fmt(std::abs(alpha)) +
                                " != 1 (printed equality)");
  }

  // beta chain: a21/a31 = 1/a32
  if (a31 == 0.0 && a21 != 0.0) {
    result.failures.push_back("undefined ratio a21/a31 (a31 = 0)");
  } else if (a32 == 0.0) {
    result.failures.push_back("undefined ratio 1/a32 (a32 = 0)");
  } else {
    const double beta = 1.0 / a32;
    result.beta = beta;
    if (a31 != 0.0 && !ratios_agree(a21 / a31, beta))
      result.failures.push_back("beta chain broken: a21/a31 = " + fmt(a21 / a31) +
                                " vs 1/a32 = " + fmt(beta));
    if (std::abs(beta) > 1.0 + kAlphaSlack)
      result.failures.push_back("|beta| = " + fmt(std::abs(beta)) + " exceeds 1");
  }

  result.pass = result.failures.empty();
  return result;
}

}  // namespace icregime::regimes
