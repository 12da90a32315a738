// icregime: strong-interference regime checks, joint-decoding rate regions,
// and brute-force inequality verification for small channels.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "icregime/errors.hpp"
#include "icregime/json_io.hpp"
#include "icregime/model.hpp"
#include "icregime/regimes.hpp"
#include "icregime/regions.hpp"
#include "icregime/verifier.hpp"

using nlohmann::json;
using namespace icregime;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCheckedFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

struct RunConfig {
  std::string command;
  std::string input_path;
  std::string output_path;
  std::string format = "json";
  int precision = 6;
  bool no_timestamp = false;
  std::uint64_t seed = 0;
  std::map<std::string, double> tol;

  double gap_tol() const {
    auto it = tol.find("gap");
    return it == tol.end() ? verifier::kGapTol : it->second;
  }
};

double rounded(const RunConfig& cfg, double v) {
  return json_io::round_to(v, cfg.precision);
}

json rounded_array(const RunConfig& cfg, const std::vector<double>& vs) {
  json out = json::array();
  for (double v : vs) out.push_back(rounded(cfg, v));
  return out;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

void emit_text(const RunConfig& cfg, const std::string& text) {
  if (cfg.output_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.output_path);
  if (!out) throw UsageError("cannot open output file: " + cfg.output_path);
  out << text;
}

void emit_json(const RunConfig& cfg, json doc) {
  doc["command"] = cfg.command;
  if (!cfg.no_timestamp) doc["timestamp"] = utc_timestamp();
  emit_text(cfg, doc.dump(2) + "\n");
}

std::string fixed_number(const RunConfig& cfg, double v) {
  v = json_io::round_to(v, cfg.precision);
  if (v == 0.0) v = 0.0;  // normalize negative zero
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", cfg.precision, v);
  return buf;
}

template <typename T>
const T& expect_channel(const json_io::ChannelSpec& spec, const char* what) {
  const T* p = std::get_if<T>(&spec);
  if (!p) throw UsageError(std::string("input file must contain a ") + what);
  return *p;
}

std::size_t grid_cap_from_env() {
  const char* env = std::getenv("ICREGIME_MAX_GRID");
  if (!env) return verifier::GridSpec{}.max_points;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (end == env || *end != '\0' || v == 0)
    throw UsageError("ICREGIME_MAX_GRID must be a positive integer");
  return static_cast<std::size_t>(v);
}

json failures_json(const std::vector<regimes::ChainFailure>& failures) {
  json out = json::array();
  for (const auto& f : failures)
    out.push_back({{"chain", f.chain}, {"reason", f.reason}});
  return out;
}

// ---------------------------------------------------------------------------
// verbs

int run_check_gaussian(const RunConfig& cfg, const json_io::ChannelSpec& spec,
                       int shift) {
  const auto& ic = expect_channel<model::GaussianIC>(spec, "gaussian_ic");
  const auto res = regimes::gaussian_kuser_check(ic, shift);
  json doc{{"pass", res.pass}, {"shift", shift}, {"K", ic.users}};
  if (res.alphas) doc["alphas"] = rounded_array(cfg, *res.alphas);
  doc["failures"] = failures_json(res.failures);
  emit_json(cfg, doc);
  return res.pass ? kExitPass : kExitCheckedFail;
}

int run_check_3user(const RunConfig& cfg, const json_io::ChannelSpec& spec) {
  const auto& ic = expect_channel<model::GaussianIC>(spec, "gaussian_ic");
  const auto res = regimes::gaussian_3user_check(ic);
  json doc{{"pass", res.pass}, {"failures", res.failures}};
  doc["witness"] = {rounded(cfg, res.witness[0]), rounded(cfg, res.witness[1]),
                    rounded(cfg, res.witness[2])};
  if (res.alphas)
    doc["alphas"] = {rounded(cfg, (*res.alphas)[0]), rounded(cfg, (*res.alphas)[1]),
                     rounded(cfg, (*res.alphas)[2])};
  emit_json(cfg, doc);
  return res.pass ? kExitPass : kExitCheckedFail;
}

int run_check_variant46(const RunConfig& cfg, const json_io::ChannelSpec& spec) {
  const auto& ic = expect_channel<model::GaussianIC>(spec, "gaussian_ic");
  const auto res = regimes::gaussian_variant46_check(ic);
  json doc{{"pass", res.pass}, {"note", res.note}, {"failures", res.failures}};
  if (res.alpha) doc["alpha"] = rounded(cfg, *res.alpha);
  if (res.beta) doc["beta"] = rounded(cfg, *res.beta);
  emit_json(cfg, doc);
  return res.pass ? kExitPass : kExitCheckedFail;
}

int run_regime_list(const RunConfig& cfg, int users) {
  json sets = json::array();
  for (int s = 0; s < users; ++s)
    sets.push_back(json_io::to_json(regimes::generate_kuser_regime(users, s)));
  if (users == 3)
    sets.push_back(json_io::to_json(
        regimes::generate_3user_variant(regimes::ThreeUserVariant::kRegime46)));
  emit_json(cfg, json{{"K", users}, {"regimes", std::move(sets)}});
  return kExitPass;
}

int run_region(const RunConfig& cfg, const json_io::ChannelSpec& spec,
               bool simplified) {
  const auto& ic = expect_channel<model::GaussianIC>(spec, "gaussian_ic");
  const auto region =
      simplified ? regions::region_simplified(ic) : regions::region_full(ic);
  if (cfg.format == "csv") {
    std::ostringstream os;
    os << "subset,bound\n";
    for (std::uint32_t mask = 1; mask < (1u << region.users); ++mask) {
      const auto users = regions::mask_to_users(mask);
      for (size_t i = 0; i < users.size(); ++i) os << (i ? "+" : "") << users[i];
      os << ',' << fixed_number(cfg, region.bounds[mask]) << '\n';
    }
    emit_text(cfg, os.str());
    return kExitPass;
  }
  json doc = json_io::to_json(region, cfg.precision);
  doc["simplified"] = simplified;
  emit_json(cfg, doc);
  return kExitPass;
}

int run_membership(const RunConfig& cfg, const json_io::ChannelSpec& spec,
                   const std::vector<double>& rates) {
  const auto& ic = expect_channel<model::GaussianIC>(spec, "gaussian_ic");
  model::RateVector rv;
  try {
    rv = model::RateVector::create(rates);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const auto res = regions::membership(regions::region_full(ic), rv);
  json violated = json::array();
  for (auto mask : res.violated) violated.push_back(regions::mask_to_users(mask));
  emit_json(cfg, json{{"inside", res.inside},
                      {"rates", rounded_array(cfg, rates)},
                      {"violated", std::move(violated)}});
  return res.inside ? kExitPass : kExitCheckedFail;
}

int run_sum_capacity(const RunConfig& cfg, const json_io::ChannelSpec& spec) {
  const auto& ic = expect_channel<model::GaussianIC>(spec, "gaussian_ic");
  emit_text(cfg, fixed_number(cfg, regions::sum_capacity(ic)) + std::string("\n"));
  return kExitPass;
}

int run_vertices(const RunConfig& cfg, const json_io::ChannelSpec& spec) {
  const auto& ic = expect_channel<model::GaussianIC>(spec, "gaussian_ic");
  const auto verts = regions::vertices(regions::region_full(ic));
  if (cfg.format == "csv") {
    std::ostringstream os;
    for (int i = 1; i <= ic.users; ++i) os << (i > 1 ? "," : "") << 'r' << i;
    os << '\n';
    for (const auto& v : verts) {
      for (size_t i = 0; i < v.rates.size(); ++i)
        os << (i ? "," : "") << fixed_number(cfg, v.rates[i]);
      os << '\n';
    }
    emit_text(cfg, os.str());
    return kExitPass;
  }
  json list = json::array();
  for (const auto& v : verts) list.push_back(rounded_array(cfg, v.rates));
  emit_json(cfg, json{{"K", ic.users}, {"vertices", std::move(list)}});
  return kExitPass;
}

std::vector<std::pair<int, double>> parse_fixed(const std::string& text) {
  std::vector<std::pair<int, double>> fixed;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    const auto eq = part.find('=');
    if (eq == std::string::npos)
      throw UsageError("--fix expects i=value[,j=value], got '" + part + "'");
    try {
      fixed.emplace_back(std::stoi(part.substr(0, eq)),
                         std::stod(part.substr(eq + 1)));
    } catch (const std::exception&) {
      throw UsageError("--fix expects i=value[,j=value], got '" + part + "'");
    }
  }
  if (fixed.empty()) throw UsageError("--fix expects at least one coordinate");
  return fixed;
}

int run_slice(const RunConfig& cfg, const json_io::ChannelSpec& spec,
              const std::string& fix_text, const std::string& gnuplot_path) {
  const auto& ic = expect_channel<model::GaussianIC>(spec, "gaussian_ic");
  const auto fixed = parse_fixed(fix_text);
  std::vector<regions::Point2> polygon;
  try {
    polygon = regions::slice(regions::region_full(ic), fixed);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  if (cfg.format == "json") {
    json pts = json::array();
    for (const auto& p : polygon)
      pts.push_back({rounded(cfg, p.x), rounded(cfg, p.y)});
    json fx = json::array();
    for (auto [coord, value] : fixed)
      fx.push_back({{"coordinate", coord}, {"value", rounded(cfg, value)}});
    emit_json(cfg, json{{"fixed", std::move(fx)}, {"polygon", std::move(pts)}});
  } else {
    std::ostringstream os;
    os << "# fixed:";
    for (auto [coord, value] : fixed)
      os << " r" << coord << "=" << fixed_number(cfg, value);
    os << "\nx,y\n";
    for (const auto& p : polygon)
      os << fixed_number(cfg, p.x) << ',' << fixed_number(cfg, p.y) << '\n';
    emit_text(cfg, os.str());
  }

  if (!gnuplot_path.empty()) {
    if (cfg.output_path.empty())
      throw UsageError("--gnuplot requires --output so the script can name the data file");
    std::ofstream gp(gnuplot_path);
    if (!gp) throw UsageError("cannot open gnuplot script path: " + gnuplot_path);
    gp << "set datafile separator ','\n"
       << "set xlabel 'first free rate (bits)'\n"
       << "set ylabel 'second free rate (bits)'\n"
       << "set grid\n"
       << "plot '" << cfg.output_path
       << "' every ::1 using 1:2 with linespoints title 'region slice'\n";
  }
  return kExitPass;
}

int run_support(const RunConfig& cfg, const json_io::ChannelSpec& spec,
                const std::vector<double>& direction) {
  const auto& ic = expect_channel<model::GaussianIC>(spec, "gaussian_ic");
  try {
    const double v = regions::support(regions::region_full(ic), direction);
    emit_text(cfg, fixed_number(cfg, v) + std::string("\n"));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return kExitPass;
}

int run_redundancy(const RunConfig& cfg, const json_io::ChannelSpec& spec,
                   int shift) {
  const auto& ic = expect_channel<model::GaussianIC>(spec, "gaussian_ic");
  if (!regimes::gaussian_kuser_check(ic, shift).pass) {
    emit_json(cfg, json{{"error", "ic not in declared regime"}, {"shift", shift}});
    return kExitCheckedFail;
  }
  const auto res = regions::redundancy_check(ic, shift);
  json doc{{"equivalent", res.equivalent},
           {"shift", shift},
           {"bounds_compared", res.bounds_compared},
           {"points_tested", res.points_tested}};
  if (res.counterexample)
    doc["counterexample"] = rounded_array(cfg, res.counterexample->rates);
  emit_json(cfg, doc);
  return res.equivalent ? kExitPass : kExitCheckedFail;
}

json product_law_json(const RunConfig& cfg, const verifier::ProductLaw& law) {
  json conds = json::array();
  for (const auto& c : law.cond) conds.push_back(rounded_array(cfg, c));
  return json{{"block", rounded_array(cfg, law.block)}, {"cond", std::move(conds)}};
}

json sampled_law_json(const RunConfig& cfg, const verifier::SampledGapResult& res) {
  return json{{"axes", res.axis_sizes}, {"probs", rounded_array(cfg, res.worst_joint)}};
}

int emit_gap_report(const RunConfig& cfg, const std::string& operation,
                    std::uint64_t digest, const std::string& mode,
                    std::size_t n_evaluated, double min_gap, json argmin_law,
                    double elapsed_ms) {
  const bool pass = min_gap >= -cfg.gap_tol();
  emit_json(cfg, json{{"operation", operation},
                      {"channel_digest", json_io::digest_hex(digest)},
                      {"mode", mode},
                      {"n_evaluated", n_evaluated},
                      {"min_gap", rounded(cfg, min_gap)},
                      {"argmin_law", std::move(argmin_law)},
                      {"seed", cfg.seed},
                      {"elapsed_ms", cfg.no_timestamp ? 0.0 : rounded(cfg, elapsed_ms)},
                      {"pass", pass}});
  return pass ? kExitPass : kExitCheckedFail;
}

int run_grid_gap(const RunConfig& cfg, const json_io::ChannelSpec& spec,
                 int resolution, int samples) {
  const auto& ch =
      expect_channel<model::DiscreteTwoOutputChannel>(spec, "discrete_two_output");
  verifier::GridSpec grid;
  grid.resolution = resolution;
  grid.max_points = grid_cap_from_env();
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&]() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - t0).count();
  };
  try {
    const auto res = verifier::grid_min_gap(ch, grid);
    return emit_gap_report(cfg, "grid-gap", verifier::channel_digest(ch), "grid",
                           res.n_evaluated, res.min_gap,
                           product_law_json(cfg, res.argmin), elapsed());
  } catch (const verifier::GridOverflowError&) {
    // projected grid exceeds the cap: fall back to seeded sampling, honestly
    // labeled in the report's mode field
    verifier::SampleSpec fallback;
    fallback.n_samples = samples;
    fallback.seed = cfg.seed;
    const auto res = verifier::sample_lemma1_gap(ch, 1, fallback);
    return emit_gap_report(cfg, "grid-gap", verifier::channel_digest(ch), "sampled",
                           res.n_evaluated, res.min_gap, sampled_law_json(cfg, res),
                           elapsed());
  }
}

int run_sampled_gap(const RunConfig& cfg, const json_io::ChannelSpec& spec,
                    const std::string& operation, int d_size, int u_size,
                    const std::vector<int>& subset, int samples) {
  const auto& ch =
      expect_channel<model::DiscreteTwoOutputChannel>(spec, "discrete_two_output");
  verifier::SampleSpec s;
  s.n_samples = samples;
  s.seed = cfg.seed;

  const auto t0 = std::chrono::steady_clock::now();
  verifier::SampledGapResult res;
  try {
    if (operation == "lemma1") res = verifier::sample_lemma1_gap(ch, d_size, s);
    else if (operation == "lemma3") res = verifier::sample_lemma3_gap_n2(ch, d_size, s);
    else if (operation == "lemma4") res = verifier::sample_lemma4_gap(ch, u_size, d_size, s);
    else res = verifier::corollary1_gap(ch, subset, d_size, s);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const double ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - t0).count();
  return emit_gap_report(cfg, operation, verifier::channel_digest(ch), "sampled",
                         res.n_evaluated, res.min_gap, sampled_law_json(cfg, res), ms);
}

const model::StochasticMatrix& first_marginal(const json_io::ChannelSpec& spec,
                                              const char* which) {
  const auto* bc = std::get_if<model::DiscreteBroadcastChannel>(&spec);
  if (!bc || bc->marginals.empty())
    throw UsageError(std::string(which) +
                     " must be a broadcast spec with at least one marginal");
  return bc->marginals.front();
}

int run_degrade_test(const RunConfig& cfg, const json_io::ChannelSpec& spec,
                     const std::string& second_path) {
  const auto second = json_io::load_channel_file(second_path);
  const auto& p1 = first_marginal(spec, "input");
  const auto& p2 = first_marginal(second, "--second");
  const auto res = verifier::degradation_feasibility(p1, p2);
  json doc{{"degraded", res.degraded},
           {"max_residual", rounded(cfg, res.max_residual)}};
  if (res.garble) {
    json rows = json::array();
    for (int r = 0; r < res.garble->rows; ++r) {
      json row = json::array();
      for (int c = 0; c < res.garble->cols; ++c)
        row.push_back(rounded(cfg, (*res.garble)(r, c)));
      rows.push_back(std::move(row));
    }
    doc["garble"] = std::move(rows);
  }
  emit_json(cfg, doc);
  return res.degraded ? kExitPass : kExitCheckedFail;
}

int run_bc_order(const RunConfig& cfg, const json_io::ChannelSpec& spec,
                 int resolution) {
  const auto& bc = expect_channel<model::DiscreteBroadcastChannel>(spec, "broadcast");
  verifier::GridSpec grid;
  grid.resolution = resolution;
  grid.max_points = grid_cap_from_env();
  const auto res = verifier::bc_more_capable_order(bc, grid);
  json doc{{"n_evaluated", res.n_evaluated},
           {"min_margins", rounded_array(cfg, res.min_margins)}};
  if (res.order) doc["order"] = *res.order;
  emit_json(cfg, doc);
  return res.order ? kExitPass : kExitCheckedFail;
}

int run_bc_sumcap(const RunConfig& cfg, const json_io::ChannelSpec& spec,
                  int strongest) {
  const auto& bc = expect_channel<model::DiscreteBroadcastChannel>(spec, "broadcast");
  const auto res = verifier::bc_sum_capacity(bc, strongest);
  emit_json(cfg, json{{"capacity", rounded(cfg, res.capacity)},
                      {"strongest", strongest},
                      {"iterations", res.iterations},
                      {"argmax", rounded_array(cfg, res.argmax.probs)}});
  return kExitPass;
}

int run_degraded_equivalent(const RunConfig& cfg, const json_io::ChannelSpec& spec) {
  const auto& sys = expect_channel<model::TwoOutputSystem>(spec, "two_output_system");
  const auto check = regimes::ratio_condition_check(sys);
  json doc;
  doc["ratio_check"] = {{"pass", check.pass}, {"reason", check.reason}};
  if (check.alpha) doc["ratio_check"]["alpha"] = rounded(cfg, *check.alpha);
  if (check.pass) {
    const auto con = regimes::degraded_equivalent(sys);
    doc["construction"] = {{"alpha", rounded(cfg, con.alpha)},
                           {"x_coeffs", rounded_array(cfg, con.x_coeffs)},
                           {"noise_scale", rounded(cfg, con.noise_scale)}};
  }
  emit_json(cfg, doc);
  return check.pass ? kExitPass : kExitCheckedFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"interference-channel strong-interference toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  app.add_option("--output", cfg.output_path, "write the report to this path");
  app.add_option("--format", cfg.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--precision", cfg.precision, "decimal places (0..15)")
      ->check(CLI::Range(0, 15));
  app.add_flag("--no-timestamp", cfg.no_timestamp,
               "omit timestamps and timings for byte-stable output");
  app.add_option("--seed", cfg.seed, "seed for sampled operations (default 0)");
  std::vector<std::string> tol_args;
  app.add_option("--tol", tol_args, "tolerance override key=value (known: gap)");

  // per-verb state
  std::string input, second_path, fix_text, gnuplot_path;
  int shift = 0, users = 3, resolution = 8, bc_resolution = 64;
  int d_size = 3, u_size = 2, samples = 200, strongest = 1;
  bool simplified = false, format_given = false;
  std::vector<double> rates, direction;
  std::vector<int> subset;

  auto with_input = [&](CLI::App* sub) {
    sub->add_option("input", input, "channel spec JSON file")->required();
    return sub;
  };

  auto* check_gaussian = with_input(app.add_subcommand(
      "check-gaussian", "cyclic K-user gain-ratio regime check"));
  check_gaussian->add_option("--shift", shift, "cyclic relabeling (default 0)");

  with_input(app.add_subcommand("check-3user", "direct 3-user product-identity check"));
  with_input(app.add_subcommand("check-variant46",
                                "fully-product 3-user variant check (literal)"));

  auto* regime_list = app.add_subcommand("regime-list", "print condition sets");
  regime_list->add_option("--k", users, "user count")->required();

  auto* region = with_input(app.add_subcommand("region", "subset-sum rate region"));
  region->add_flag("--simplified", simplified, "min over receivers in the subset only");

  auto* membership = with_input(app.add_subcommand("membership", "rate vector test"));
  membership->add_option("--rates", rates, "comma separated rates")
      ->required()
      ->delimiter(',');

  with_input(app.add_subcommand("sum-capacity", "min-receiver full-set bound"));
  with_input(app.add_subcommand("vertices", "vertex enumeration (K <= 3)"));

  auto* slice = with_input(app.add_subcommand("slice", "2-D cross-section polygon"));
  slice->add_option("--fix", fix_text, "fixed coordinates i=v[,j=v]")->required();
  slice->add_option("--gnuplot", gnuplot_path, "also write a gnuplot script");

  auto* support = with_input(app.add_subcommand("support", "support function value"));
  support->add_option("--direction", direction, "comma separated weights")
      ->required()
      ->delimiter(',');

  auto* redundancy = with_input(app.add_subcommand(
      "redundancy", "full vs simplified region equivalence inside the regime"));
  redundancy->add_option("--shift", shift, "cyclic relabeling (default 0)");

  auto* grid_gap = with_input(app.add_subcommand(
      "grid-gap", "exhaustive product-family gap scan"));
  grid_gap->add_option("--resolution", resolution, "grid denominator (default 8)");
  grid_gap->add_option("--samples", samples, "fallback sample count on overflow");

  for (const std::string op : {"lemma1", "lemma3", "lemma4", "corollary1"}) {
    auto* sub = with_input(app.add_subcommand(op, "sampled inequality gap"));
    sub->add_option("--d-size", d_size, "auxiliary alphabet size (default 3)");
    sub->add_option("--samples", samples, "Dirichlet sample count (default 200)");
    if (op == "lemma4")
      sub->add_option("--u-size", u_size, "auxiliary U alphabet size (default 2)");
    if (op == "corollary1")
      sub->add_option("--subset", subset, "block indices moved into conditioning")
          ->delimiter(',');
  }

  auto* degrade = with_input(app.add_subcommand(
      "degrade-test", "garbling feasibility between two single-receiver specs"));
  degrade->add_option("--second", second_path, "second broadcast spec")->required();

  auto* bc_order = with_input(app.add_subcommand(
      "bc-order", "more-capable ordering over an input grid"));
  bc_order->add_option("--resolution", bc_resolution, "grid denominator (default 64)");

  auto* bc_sumcap = with_input(app.add_subcommand(
      "bc-sumcap", "sum capacity at the strongest receiver"));
  bc_sumcap->add_option("--strongest", strongest, "receiver index (default 1)");

  with_input(app.add_subcommand("degraded-equivalent",
                                "ratio check plus synthetic-output construction"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    std::cerr << "run with --help for usage\n";
    return kExitUsage;
  }
  format_given = app.count("--format") > 0;

  try {
    for (const auto& kv : tol_args) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos)
        throw UsageError("--tol expects key=value, got '" + kv + "'");
      const std::string key = kv.substr(0, eq);
      if (key != "gap") throw UsageError("unknown tolerance key '" + key + "'");
      try {
        cfg.tol[key] = std::stod(kv.substr(eq + 1));
      } catch (const std::exception&) {
        throw UsageError("--tol " + key + ": bad numeric value");
      }
    }
    cfg.input_path = input;

    CLI::App* sub = app.get_subcommands().front();
    cfg.command = sub->get_name();
    const std::string& verb = cfg.command;

    if (verb == "regime-list") return run_regime_list(cfg, users);

    const json_io::ChannelSpec spec = json_io::load_channel_file(cfg.input_path);
    if (verb == "check-gaussian") return run_check_gaussian(cfg, spec, shift);
    if (verb == "check-3user") return run_check_3user(cfg, spec);
    if (verb == "check-variant46") return run_check_variant46(cfg, spec);
    if (verb == "region") return run_region(cfg, spec, simplified);
    if (verb == "membership") return run_membership(cfg, spec, rates);
    if (verb == "sum-capacity") return run_sum_capacity(cfg, spec);
    if (verb == "vertices") return run_vertices(cfg, spec);
    if (verb == "slice") {
      if (!format_given) cfg.format = "csv";  // plot support defaults to CSV
      return run_slice(cfg, spec, fix_text, gnuplot_path);
    }
    if (verb == "support") return run_support(cfg, spec, direction);
    if (verb == "redundancy") return run_redundancy(cfg, spec, shift);
    if (verb == "grid-gap") return run_grid_gap(cfg, spec, resolution, samples);
    if (verb == "lemma1" || verb == "lemma3" || verb == "lemma4" ||
        verb == "corollary1")
      return run_sampled_gap(cfg, spec, verb, d_size, u_size, subset, samples);
    if (verb == "degrade-test") return run_degrade_test(cfg, spec, second_path);
    if (verb == "bc-order") return run_bc_order(cfg, spec, bc_resolution);
    if (verb == "bc-sumcap") return run_bc_sumcap(cfg, spec, strongest);
    if (verb == "degraded-equivalent") return run_degraded_equivalent(cfg, spec);
    throw UsageError("unknown verb: " + verb);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    // library-level contract violations driven by the request
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitNumeric;
  }
}
