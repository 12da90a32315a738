#include "icregime/json_io.hpp"

#include <cmath>
#include <fstream>

#include "icregime/errors.hpp"

namespace icregime::json_io {

using nlohmann::json;

namespace {

const json& require(const json& doc, const char* field) {
  auto it = doc.find(field);
  if (it == doc.end()) throw UsageError(std::string("missing field: ") + field);
  return *it;
}

double number(const json& v, const char* field) {
  if (!v.is_number()) throw UsageError(std::string(field) + ": expected a number");
  return v.get<double>();
}

int integer(const json& v, const char* field) {
  if (!v.is_number_integer())
    throw UsageError(std::string(field) + ": expected an integer");
  return v.get<int>();
}

std::vector<double> number_array(const json& v, const char* field) {
  if (!v.is_array()) throw UsageError(std::string(field) + ": expected an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& e : v) out.push_back(number(e, field));
  return out;
}

std::vector<std::vector<double>> matrix(const json& v, const char* field) {
  if (!v.is_array()) throw UsageError(std::string(field) + ": expected an array of rows");
  std::vector<std::vector<double>> out;
  for (const auto& row : v) out.push_back(number_array(row, field));
  return out;
}

// flattens a nested row-major array with the given expected leaf count
void flatten_into(const json& v, std::vector<double>& out, const char* field) {
  if (v.is_number()) {
    out.push_back(v.get<double>());
    return;
  }
  if (!v.is_array())
    throw UsageError(std::string(field) + ": expected nested numeric arrays");
  for (const auto& e : v) flatten_into(e, out, field);
}

model::GaussianIC parse_gaussian(const json& doc) {
  auto gains = matrix(require(doc, "gains"), "gains");
  auto powers = number_array(require(doc, "powers"), "powers");
  try {
    return model::GaussianIC::create(std::move(gains), std::move(powers));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

model::TwoOutputSystem parse_two_output(const json& doc) {
  const int mu1 = integer(require(doc, "mu1"), "mu1");
  auto a = number_array(require(doc, "a"), "a");
  auto b = number_array(require(doc, "b"), "b");
  const int mu2 = static_cast<int>(a.size()) - mu1;
  try {
    return model::TwoOutputSystem::create(mu1, mu2, std::move(a), std::move(b));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

model::DiscreteTwoOutputChannel parse_discrete(const json& doc) {
  const int mu1 = integer(require(doc, "mu1"), "mu1");
  const json& alph = require(doc, "alphabets");
  if (!alph.is_array()) throw UsageError("alphabets: expected an array");
  std::vector<int> alphabets;
  for (const auto& e : alph) alphabets.push_back(integer(e, "alphabets"));
  const int y1 = integer(require(doc, "y1_size"), "y1_size");
  const int y2 = integer(require(doc, "y2_size"), "y2_size");
  std::vector<double> transitions;
  flatten_into(require(doc, "transitions"), transitions, "transitions");

  const int mu2 = static_cast<int>(alphabets.size()) - mu1;
  model::DiscreteTwoOutputChannel ch;
  try {
    ch = model::DiscreteTwoOutputChannel::create(mu1, mu2, std::move(alphabets),
                                                 y1, y2, std::move(transitions),
                                                 model::kFileTol);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  // renormalize each slice so in-process invariants hold at strict tolerance
  const size_t slice = static_cast<size_t>(y1) * y2;
  for (int x = 0; x < ch.input_tuple_count(); ++x) {
    double sum = 0.0;
    for (size_t k = 0; k < slice; ++k) sum += ch.transitions[x * slice + k];
    for (size_t k = 0; k < slice; ++k) ch.transitions[x * slice + k] /= sum;
  }
  return ch;
}

model::DiscreteBroadcastChannel parse_broadcast(const json& doc) {
  const int x_size = integer(require(doc, "x_size"), "x_size");
  const json& marg = require(doc, "marginals");
  if (!marg.is_array() || marg.empty())
    throw UsageError("marginals: expected a non-empty array of matrices");
  std::vector<model::StochasticMatrix> marginals;
  for (const auto& m : marg) {
    auto rows = matrix(m, "marginals");
    if (rows.empty()) throw UsageError("marginals: empty matrix");
    const int cols = static_cast<int>(rows[0].size());
    std::vector<double> flat;
    for (auto& r : rows) {
      if (static_cast<int>(r.size()) != cols)
        throw UsageError("marginals: ragged matrix rows");
      double sum = 0.0;
      for (double v : r) sum += v;
      if (std::abs(sum - 1.0) > model::kFileTol)
        throw UsageError("marginals: row sums to " + std::to_string(sum));
      for (double v : r) flat.push_back(v / sum);
    }
    try {
      marginals.push_back(model::StochasticMatrix::create(
          static_cast<int>(rows.size()), cols, std::move(flat)));
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("marginals: ") + e.what());
    }
  }
  try {
    return model::DiscreteBroadcastChannel::create(x_size, std::move(marginals));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

}  // namespace

ChannelSpec parse_channel_spec(const json& doc) {
  if (!doc.is_object()) throw UsageError("channel spec must be a JSON object");
  const json& type = require(doc, "type");
  if (!type.is_string()) throw UsageError("type: expected a string");
  const std::string t = type.get<std::string>();
  if (t == "gaussian_ic") return parse_gaussian(doc);
  if (t == "two_output_system") return parse_two_output(doc);
  if (t == "discrete_two_output") return parse_discrete(doc);
  if (t == "broadcast") return parse_broadcast(doc);
  throw UsageError("type: unknown channel type '" + t + "'");
}

ChannelSpec load_channel_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open input file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw UsageError("JSON parse error in " + path + ": " + e.what());
  }
  return parse_channel_spec(doc);
}

double round_to(double v, int precision) {
  if (!std::isfinite(v)) return v;
  const double scale = std::pow(10.0, precision);
  return std::round(v * scale) / scale;
}

json to_json(const regimes::MIInequality& ineq) {
  json out;
  out["lhs"] = ineq.lhs_inputs;
  out["cond"] = ineq.conditioning;
  out["smaller_receiver"] = ineq.smaller_receiver;
  out["larger_receiver"] = ineq.larger_receiver;
  out["factorization"] = ineq.factorization;
  return out;
}

json to_json(const regimes::ConditionSet& set) {
  json out;
  out["K"] = set.users;
  out["label"] = set.label;
  out["inequalities"] = json::array();
  for (const auto& ineq : set.inequalities) out["inequalities"].push_back(to_json(ineq));
  return out;
}

json to_json(const regions::RegionSpec& region, int precision) {
  json constraints = json::array();
  for (std::uint32_t mask = 1; mask < (1u << region.users); ++mask) {
    json c;
    c["subset"] = regions::mask_to_users(mask);
    c["bound"] = round_to(region.bounds[mask], precision);
    c["argmin_receivers"] = region.argmin_receivers[mask];
    constraints.push_back(std::move(c));
  }
  return json{{"K", region.users}, {"constraints", std::move(constraints)}};
}

std::string digest_hex(std::uint64_t digest) {
  static const char* hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = hex[digest & 0xF];
    digest >>= 4;
  }
  return out;
}

}  // namespace icregime::json_io
