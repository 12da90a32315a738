#include "icregime/model.hpp"

#include <cmath>
#include <cstddef>
#include <sstream>
#include <stdexcept>

namespace icregime::model {

namespace {

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += "; ";
    out += parts[i];
  }
  return out;
}

template <typename T>
T checked(T value, std::vector<std::string> (*validator)(const T&)) {
  auto report = validator(value);
  if (!report.empty()) throw std::invalid_argument(join(report));
  return value;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

GaussianIC GaussianIC::create(std::vector<std::vector<double>> gains,
                              std::vector<double> powers) {
  GaussianIC ic;
  ic.users = static_cast<int>(gains.size());
  ic.gains = std::move(gains);
  ic.powers = std::move(powers);
  return checked(std::move(ic), &validate);
}

std::vector<std::string> validate(const GaussianIC& ic) {
  std::vector<std::string> report;
  const int k = ic.users;
  if (k < 2) report.push_back("users: K must be >= 2, got " + std::to_string(k));
  if (static_cast<int>(ic.gains.size()) != k)
    report.push_back("gains: expected " + std::to_string(k) + " rows");
  for (size_t j = 0; j < ic.gains.size(); ++j) {
    if (static_cast<int>(ic.gains[j].size()) != k) {
      report.push_back("gains: row " + std::to_string(j + 1) + " has wrong length");
      continue;
    }
    for (size_t i = 0; i < ic.gains[j].size(); ++i) {
      const double g = ic.gains[j][i];
      if (!std::isfinite(g))
        report.push_back("gains: entry (" + std::to_string(j + 1) + "," +
                         std::to_string(i + 1) + ") not finite");
      else if (i == j && g != 1.0)
        report.push_back("gains: diagonal not 1 at receiver " +
                         std::to_string(j + 1) + " (standard form requires a_ii = 1)");
    }
  }
  if (static_cast<int>(ic.powers.size()) != k)
    report.push_back("powers: expected length " + std::to_string(k));
  for (size_t i = 0; i < ic.powers.size(); ++i) {
    const double p = ic.powers[i];
    if (!(std::isfinite(p) && p > 0.0))
      report.push_back("powers: P_" + std::to_string(i + 1) +
                       " must be strictly positive and finite, got " + fmt(p));
  }
  return report;
}

TwoOutputSystem TwoOutputSystem::create(int mu1, int mu2, std::vector<double> a,
                                        std::vector<double> b) {
  TwoOutputSystem sys;
  sys.mu1 = mu1;
  sys.mu2 = mu2;
  sys.a = std::move(a);
  sys.b = std::move(b);
  return checked(std::move(sys), &validate);
}

std::vector<std::string> validate(const TwoOutputSystem& sys) {
  std::vector<std::string> report;
  if (sys.mu1 < 1) report.push_back("mu1: must be >= 1");
  if (sys.mu2 < 0) report.push_back("mu2: must be >= 0");
  if (!report.empty()) return report;
  const size_t n = static_cast<size_t>(sys.mu1) + static_cast<size_t>(sys.mu2);
  if (sys.a.size() != n) report.push_back("a: length must equal mu1 + mu2");
  if (sys.b.size() != n) report.push_back("b: length must equal mu1 + mu2");
  for (double v : sys.a)
    if (!std::isfinite(v)) { report.push_back("a: non-finite coefficient"); break; }
  for (double v : sys.b)
    if (!std::isfinite(v)) { report.push_back("b: non-finite coefficient"); break; }
  return report;
}

DiscretePMF DiscretePMF::create(std::vector<double> probs, double tol) {
  DiscretePMF pmf;
  pmf.probs = std::move(probs);
  auto report = validate(pmf, tol);
  if (!report.empty()) throw std::invalid_argument(join(report));
  return pmf;
}

std::vector<std::string> validate(const DiscretePMF& pmf, double tol) {
  std::vector<std::string> report;
  if (pmf.probs.empty()) {
    report.push_back("probs: empty alphabet");
    return report;
  }
  double sum = 0.0;
  for (size_t i = 0; i < pmf.probs.size(); ++i) {
    const double p = pmf.probs[i];
    if (!std::isfinite(p) || p < 0.0 || p > 1.0 + tol) {
      report.push_back("probs: entry " + std::to_string(i) + " = " + fmt(p) +
                       " outside [0, 1]");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > tol)
    report.push_back("probs: sum " + fmt(sum) + " != 1");
  return report;
}

StochasticMatrix StochasticMatrix::create(int rows, int cols,
                                          std::vector<double> p, double tol) {
  StochasticMatrix m;
  m.rows = rows;
  m.cols = cols;
  m.p = std::move(p);
  auto report = validate(m, tol);
  if (!report.empty()) throw std::invalid_argument(join(report));
  return m;
}

std::vector<std::string> validate(const StochasticMatrix& m, double tol) {
  std::vector<std::string> report;
  if (m.rows < 1 || m.cols < 1) {
    report.push_back("shape: rows and cols must be >= 1");
    return report;
  }
  if (m.p.size() != static_cast<size_t>(m.rows) * m.cols) {
    report.push_back("p: storage size does not match rows*cols");
    return report;
  }
  for (int r = 0; r < m.rows; ++r) {
    double sum = 0.0;
    bool bad_entry = false;
    for (int c = 0; c < m.cols; ++c) {
      const double v = m(r, c);
      if (!std::isfinite(v) || v < 0.0 || v > 1.0 + tol) bad_entry = true;
      sum += v;
    }
    if (bad_entry)
      report.push_back("p: row " + std::to_string(r) + " has entries outside [0, 1]");
    if (std::abs(sum - 1.0) > tol)
      report.push_back("p: row " + std::to_string(r) + " sums to " + fmt(sum) + " != 1");
  }
  return report;
}

int DiscreteTwoOutputChannel::input_tuple_count() const {
  int n = 1;
  for (int s : input_alphabets) n *= s;
  return n;
}

DiscreteTwoOutputChannel DiscreteTwoOutputChannel::create(
    int mu1, int mu2, std::vector<int> input_alphabets, int y1_size,
    int y2_size, std::vector<double> transitions, double tol) {
  DiscreteTwoOutputChannel ch;
  ch.mu1 = mu1;
  ch.mu2 = mu2;
  ch.input_alphabets = std::move(input_alphabets);
  ch.y1_size = y1_size;
  ch.y2_size = y2_size;
  ch.transitions = std::move(transitions);
  auto report = validate(ch, tol);
  if (!report.empty()) throw std::invalid_argument(join(report));
  return ch;
}

std::vector<std::string> validate(const DiscreteTwoOutputChannel& ch, double tol) {
  std::vector<std::string> report;
  if (ch.mu1 < 1) report.push_back("mu1: must be >= 1");
  if (ch.mu2 < 0) report.push_back("mu2: must be >= 0");
  if (static_cast<int>(ch.input_alphabets.size()) != ch.mu1 + ch.mu2) {
    report.push_back("input_alphabets: expected mu1 + mu2 entries");
    return report;
  }
  long total = 1;
  for (size_t i = 0; i < ch.input_alphabets.size(); ++i) {
    const int s = ch.input_alphabets[i];
    if (s < 1 || s > kMaxAlphabet)
      report.push_back("input_alphabets: variable " + std::to_string(i + 1) +
                       " size " + std::to_string(s) + " outside [1, " +
                       std::to_string(kMaxAlphabet) + "]");
    total *= std::max(1, s);
  }
  if (total > kMaxInputTuples)
    report.push_back("input_alphabets: input tuple count " + std::to_string(total) +
                     " exceeds cap " + std::to_string(kMaxInputTuples));
  if (ch.y1_size < 1 || ch.y1_size > kMaxAlphabet)
    report.push_back("y1_size: outside [1, " + std::to_string(kMaxAlphabet) + "]");
  if (ch.y2_size < 1 || ch.y2_size > kMaxAlphabet)
    report.push_back("y2_size: outside [1, " + std::to_string(kMaxAlphabet) + "]");
  if (!report.empty()) return report;

  const size_t slice = static_cast<size_t>(ch.y1_size) * ch.y2_size;
  if (ch.transitions.size() != slice * static_cast<size_t>(total)) {
    report.push_back("transitions: storage size does not match alphabets");
    return report;
  }
  for (long x = 0; x < total; ++x) {
    double sum = 0.0;
    bool bad = false;
    for (size_t k = 0; k < slice; ++k) {
      const double v = ch.transitions[x * slice + k];
      if (!std::isfinite(v) || v < 0.0 || v > 1.0 + tol) bad = true;
      sum += v;
    }
    if (bad || std::abs(sum - 1.0) > tol) {
      report.push_back("transitions: input tuple " + std::to_string(x) +
                       " slice is not a PMF (sum " + fmt(sum) + ")");
      if (report.size() > 8) {
        report.push_back("transitions: further violations suppressed");
        break;
      }
    }
  }
  return report;
}

DiscreteBroadcastChannel DiscreteBroadcastChannel::create(
    int x_size, std::vector<StochasticMatrix> marginals) {
  DiscreteBroadcastChannel bc;
  bc.x_size = x_size;
  bc.marginals = std::move(marginals);
  auto report = validate(bc);
  if (!report.empty()) throw std::invalid_argument(join(report));
  return bc;
}

std::vector<std::string> validate(const DiscreteBroadcastChannel& bc, double tol) {
  std::vector<std::string> report;
  if (bc.x_size < 1 || bc.x_size > kMaxAlphabet)
    report.push_back("x_size: outside [1, " + std::to_string(kMaxAlphabet) + "]");
  if (bc.marginals.empty()) report.push_back("marginals: at least one receiver required");
  for (size_t k = 0; k < bc.marginals.size(); ++k) {
    const auto& m = bc.marginals[k];
    if (m.rows != bc.x_size)
      report.push_back("marginals: receiver " + std::to_string(k + 1) +
                       " row count != x_size");
    for (auto& msg : validate(m, tol))
      report.push_back("marginals: receiver " + std::to_string(k + 1) + ": " + msg);
  }
  return report;
}

RateVector RateVector::create(std::vector<double> rates) {
  RateVector r;
  r.rates = std::move(rates);
  return checked(std::move(r), &validate);
}

std::vector<std::string> validate(const RateVector& r) {
  std::vector<std::string> report;
  if (r.rates.empty()) report.push_back("rates: empty");
  for (size_t i = 0; i < r.rates.size(); ++i) {
    const double v = r.rates[i];
    if (!std::isfinite(v) || v < 0.0)
      report.push_back("rates: R_" + std::to_string(i + 1) +
                       " must be finite and >= 0, got " + fmt(v));
  }
  return report;
}

GaussianIC standardize(const std::vector<std::vector<double>>& gains,
                       const std::vector<double>& noise_vars,
                       const std::vector<double>& powers) {
  const int k = static_cast<int>(gains.size());
  if (k < 2) throw std::invalid_argument("standardize: need K >= 2");
  if (static_cast<int>(noise_vars.size()) != k ||
      static_cast<int>(powers.size()) != k)
    throw std::invalid_argument("standardize: dimension mismatch");
  for (int i = 0; i < k; ++i) {
    if (static_cast<int>(gains[i].size()) != k)
      throw std::invalid_argument("standardize: gains must be K x K");
    if (gains[i][i] == 0.0)
      throw std::invalid_argument("standardize: zero direct gain at user " +
                                  std::to_string(i + 1));
    if (!(noise_vars[i] > 0.0))
      throw std::invalid_argument("standardize: noise variance must be positive");
  }
  std::vector<std::vector<double>> a(k, std::vector<double>(k));
  std::vector<double> p(k);
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < k; ++i)
      a[j][i] = gains[j][i] * std::sqrt(noise_vars[i]) /
                (gains[i][i] * std::sqrt(noise_vars[j]));
  for (int i = 0; i < k; ++i)
    p[i] = gains[i][i] * gains[i][i] * powers[i] / noise_vars[i];
  for (int j = 0; j < k; ++j) a[j][j] = 1.0;  // exact, not up to round-off
  return GaussianIC::create(std::move(a), std::move(p));
}

}  // namespace icregime::model
