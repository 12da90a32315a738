// End-to-end checks of the command line tool: exit codes per verb, report
// shape, and byte-stable output.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#ifndef ICREGIME_BIN
#error "ICREGIME_BIN must point at the built binary"
#endif

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

fs::path scratch_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "icregime_cli_tests";
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

fs::path write_file(const std::string& name, const std::string& content) {
  const fs::path p = scratch_dir() / name;
  std::ofstream out(p);
  out << content;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run(const std::string& args) {
  const fs::path out = scratch_dir() / "stdout.txt";
  const fs::path err = scratch_dir() / "stderr.txt";
  const std::string cmd = std::string(ICREGIME_BIN) + " " + args + " > " +
                          out.string() + " 2> " + err.string();
  const int raw = std::system(cmd.c_str());
  RunResult res;
  res.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  res.out = slurp(out);
  res.err = slurp(err);
  return res;
}

const std::string kOnes3 =
    R"({"type":"gaussian_ic","gains":[[1,1,1],[1,1,1],[1,1,1]],"powers":[1,1,1]})";
const std::string kEq44 =
    R"({"type":"gaussian_ic","gains":[[1,4,2],[3,1,6],[6,2,1]],"powers":[1,1,1]})";
const std::string kWeak3 =
    R"({"type":"gaussian_ic","gains":[[1,0.1,0.1],[0.1,1,0.1],[0.1,0.1,1]],"powers":[1,1,1]})";
// BSC(0.1) base garbled by BSC(0.125), outputs swapped: violates the
// degradation inequality
const std::string kAntiDegraded = R"({
  "type": "discrete_two_output", "mu1": 1, "alphabets": [2],
  "y1_size": 2, "y2_size": 2,
  "transitions": [[0.7875, 0.1125, 0.0125, 0.0875],
                  [0.0875, 0.0125, 0.1125, 0.7875]]
})";
const std::string kDegraded = R"({
  "type": "discrete_two_output", "mu1": 1, "alphabets": [2],
  "y1_size": 2, "y2_size": 2,
  "transitions": [[0.7875, 0.0125, 0.1125, 0.0875],
                  [0.0875, 0.1125, 0.0125, 0.7875]]
})";
const std::string kBscChain = R"({
  "type": "broadcast", "x_size": 2,
  "marginals": [[[0.9, 0.1], [0.1, 0.9]],
                [[0.8, 0.2], [0.2, 0.8]],
                [[0.7, 0.3], [0.3, 0.7]]]
})";
const std::string kBsc01 =
    R"({"type":"broadcast","x_size":2,"marginals":[[[0.9,0.1],[0.1,0.9]]]})";
const std::string kBsc02 =
    R"({"type":"broadcast","x_size":2,"marginals":[[[0.8,0.2],[0.2,0.8]]]})";
const std::string kTwoOutputGood =
    R"({"type":"two_output_system","mu1":1,"a":[1,0],"b":[2,1]})";
const std::string kTwoOutputBad =
    R"({"type":"two_output_system","mu1":2,"a":[1,2],"b":[2,3]})";

}  // namespace

TEST_CASE("check-gaussian reports the chain alphas and passes") {
  const auto p = write_file("eq44.json", kEq44);
  const auto res = run("check-gaussian " + p.string() + " --no-timestamp");
  CHECK(res.exit_code == 0);
  const json doc = json::parse(res.out);
  CHECK(doc["pass"] == true);
  CHECK(doc["alphas"][0] == doctest::Approx(0.5));
  CHECK(doc["alphas"][1] == doctest::Approx(0.333333));
  CHECK(doc["alphas"][2] == doctest::Approx(0.5));
}

TEST_CASE("check-gaussian fails weak interference with exit 1") {
  const auto p = write_file("weak3.json", kWeak3);
  const auto res = run("check-gaussian " + p.string());
  CHECK(res.exit_code == 1);
  const json doc = json::parse(res.out);
  CHECK(doc["pass"] == false);
  CHECK(!doc["failures"].empty());
}

TEST_CASE("check-3user and check-variant46 run and report") {
  const auto p = write_file("eq44.json", kEq44);
  CHECK(run("check-3user " + p.string()).exit_code == 0);
  const auto res = run("check-variant46 " + p.string());
  CHECK(res.exit_code == 1);  // eq44 instance is not in the printed variant
  CHECK(json::parse(res.out)["note"].get<std::string>().find("alpha") !=
        std::string::npos);
}

TEST_CASE("sum-capacity prints a fixed-precision number") {
  const auto p = write_file("ones3.json", kOnes3);
  const auto res = run("sum-capacity " + p.string());
  CHECK(res.exit_code == 0);
  CHECK(res.out == "1.000000\n");
  const auto wide = run("sum-capacity " + p.string() + " --precision 9");
  CHECK(wide.out == "1.000000000\n");
}

TEST_CASE("membership exit code distinguishes inside from outside") {
  const auto p = write_file("ones3.json", kOnes3);
  CHECK(run("membership " + p.string() + " --rates 0.2,0.2,0.2").exit_code == 0);
  const auto out = run("membership " + p.string() + " --rates 0.5,0.5,0");
  CHECK(out.exit_code == 1);
  const json doc = json::parse(out.out);
  CHECK(doc["inside"] == false);
  CHECK(doc["violated"].size() >= 1);
}

TEST_CASE("region emits json and csv") {
  const auto p = write_file("ones3.json", kOnes3);
  const auto res = run("region " + p.string() + " --no-timestamp");
  CHECK(res.exit_code == 0);
  const json doc = json::parse(res.out);
  CHECK(doc["K"] == 3);
  CHECK(doc["constraints"].size() == 7);

  const auto csv = run("region " + p.string() + " --format csv");
  CHECK(csv.exit_code == 0);
  CHECK(csv.out.find("subset,bound") == 0);
  CHECK(csv.out.find("1+2+3,1.000000") != std::string::npos);
}

TEST_CASE("vertices and support") {
  const auto p = write_file("ones3.json", kOnes3);
  const auto v = run("vertices " + p.string() + " --no-timestamp");
  CHECK(v.exit_code == 0);
  CHECK(json::parse(v.out)["vertices"].size() >= 4);

  const auto s = run("support " + p.string() + " --direction 1,1,1");
  CHECK(s.exit_code == 0);
  CHECK(s.out == "1.000000\n");
  CHECK(run("support " + p.string() + " --direction 1,-1,0").exit_code == 2);
}

TEST_CASE("slice defaults to csv with a header comment") {
  const auto p = write_file("ones3.json", kOnes3);
  const auto res = run("slice " + p.string() + " --fix 3=0");
  CHECK(res.exit_code == 0);
  CHECK(res.out.find("# fixed: r3=0.000000") == 0);
  CHECK(res.out.find("x,y") != std::string::npos);

  // gnuplot script generation requires --output
  CHECK(run("slice " + p.string() + " --fix 3=0 --gnuplot /tmp/x.gp").exit_code == 2);
  const auto csv_path = scratch_dir() / "slice.csv";
  const auto gp_path = scratch_dir() / "slice.gp";
  const auto ok = run("slice " + p.string() + " --fix 3=0 --output " +
                      csv_path.string() + " --gnuplot " + gp_path.string());
  CHECK(ok.exit_code == 0);
  CHECK(slurp(gp_path).find(csv_path.string()) != std::string::npos);
}

TEST_CASE("redundancy verb") {
  const auto good = write_file("eq44.json", kEq44);
  const auto res = run("redundancy " + good.string());
  CHECK(res.exit_code == 0);
  CHECK(json::parse(res.out)["equivalent"] == true);

  const auto weak = write_file("weak3.json", kWeak3);
  const auto bad = run("redundancy " + weak.string());
  CHECK(bad.exit_code == 1);
  CHECK(json::parse(bad.out)["error"].get<std::string>().find("not in declared") !=
        std::string::npos);
}

TEST_CASE("grid-gap flags the anti-degraded witness with exit 1") {
  const auto p = write_file("anti.json", kAntiDegraded);
  const auto res = run("grid-gap " + p.string() + " --resolution 8 --no-timestamp");
  CHECK(res.exit_code == 1);
  const json doc = json::parse(res.out);
  CHECK(doc["mode"] == "grid");
  CHECK(doc["min_gap"].get<double>() <= -0.25);
  CHECK(doc["pass"] == false);
  // report carries the published keys
  for (const char* key : {"operation", "channel_digest", "mode", "n_evaluated",
                          "min_gap", "argmin_law", "seed", "elapsed_ms"})
    CHECK(doc.contains(key));
}

TEST_CASE("grid-gap passes the degraded channel") {
  const auto p = write_file("degraded.json", kDegraded);
  const auto res = run("grid-gap " + p.string() + " --resolution 8");
  CHECK(res.exit_code == 0);
  CHECK(json::parse(res.out)["pass"] == true);
}

TEST_CASE("grid cap environment override triggers the sampled fallback") {
  const auto p = write_file("degraded.json", kDegraded);
  const fs::path out = scratch_dir() / "fallback.json";
  const std::string cmd = std::string("ICREGIME_MAX_GRID=4 ") + ICREGIME_BIN +
                          " grid-gap " + p.string() + " --samples 50 --output " +
                          out.string();
  const int raw = std::system(cmd.c_str());
  CHECK(WEXITSTATUS(raw) == 0);
  const json doc = json::parse(slurp(out));
  CHECK(doc["mode"] == "sampled");
  CHECK(doc["n_evaluated"] == 50);
}

TEST_CASE("sampled lemma verbs run with deterministic default seed") {
  const auto p = write_file("degraded.json", kDegraded);
  for (const std::string verb : {"lemma1", "lemma3", "lemma4", "corollary1"}) {
    const auto res = run(verb + " " + p.string() +
                         " --d-size 2 --samples 40 --no-timestamp");
    CHECK(res.exit_code == 0);
    const json doc = json::parse(res.out);
    CHECK(doc["operation"] == verb);
    CHECK(doc["pass"] == true);
    CHECK(doc["mode"] == "sampled");
  }
  // corollary1 with an out-of-range subset is a usage error
  CHECK(run("corollary1 " + p.string() + " --subset 2 --samples 10").exit_code == 2);
}

TEST_CASE("lemma runs are byte-identical with --no-timestamp") {
  const auto p = write_file("degraded.json", kDegraded);
  const std::string args = "lemma1 " + p.string() +
                           " --d-size 3 --samples 60 --seed 42 --no-timestamp";
  const auto a = run(args);
  const auto b = run(args);
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
  CHECK(!a.out.empty());
}

TEST_CASE("degrade-test in both directions") {
  const auto p1 = write_file("bsc01.json", kBsc01);
  const auto p2 = write_file("bsc02.json", kBsc02);
  const auto yes = run("degrade-test " + p1.string() + " --second " + p2.string());
  CHECK(yes.exit_code == 0);
  const json doc = json::parse(yes.out);
  CHECK(doc["degraded"] == true);
  CHECK(doc["garble"][0][1] == doctest::Approx(0.125).epsilon(1e-6));

  const auto no = run("degrade-test " + p2.string() + " --second " + p1.string());
  CHECK(no.exit_code == 1);
  CHECK(json::parse(no.out)["degraded"] == false);
}

TEST_CASE("bc-order and bc-sumcap on the degraded chain") {
  const auto p = write_file("chain.json", kBscChain);
  const auto order = run("bc-order " + p.string() + " --resolution 64");
  CHECK(order.exit_code == 0);
  const json doc = json::parse(order.out);
  CHECK(doc["order"] == json::array({1, 2, 3}));

  const auto cap = run("bc-sumcap " + p.string() + " --strongest 1");
  CHECK(cap.exit_code == 0);
  CHECK(json::parse(cap.out)["capacity"].get<double>() ==
        doctest::Approx(0.531004).epsilon(1e-5));
}

TEST_CASE("degraded-equivalent pass and fail") {
  const auto good = write_file("tos_good.json", kTwoOutputGood);
  const auto res = run("degraded-equivalent " + good.string());
  CHECK(res.exit_code == 0);
  const json doc = json::parse(res.out);
  CHECK(doc["construction"]["alpha"] == doctest::Approx(0.5));
  CHECK(doc["construction"]["x_coeffs"][0] == doctest::Approx(-0.5));

  const auto bad = write_file("tos_bad.json", kTwoOutputBad);
  CHECK(run("degraded-equivalent " + bad.string()).exit_code == 1);
}

TEST_CASE("regime-list covers the cyclic family plus the printed variant") {
  const auto res = run("regime-list --k 3 --no-timestamp");
  CHECK(res.exit_code == 0);
  const json doc = json::parse(res.out);
  CHECK(doc["regimes"].size() == 4);  // 3 cyclic shifts + variant 46
  CHECK(doc["regimes"][0]["label"] == "cyclic-0");
  CHECK(doc["regimes"][3]["label"] == "3user-variant-46");
  CHECK(doc["regimes"][0]["inequalities"].size() == 3);

  const auto k4 = run("regime-list --k 4");
  CHECK(json::parse(k4.out)["regimes"].size() == 4);  // cyclic shifts only
}

TEST_CASE("usage errors exit 2") {
  CHECK(run("no-such-verb /dev/null").exit_code == 2);
  CHECK(run("sum-capacity /nonexistent.json").exit_code == 2);

  const auto bad_field = write_file("bad.json",
                                    R"({"type":"gaussian_ic","powers":[1,1]})");
  const auto res = run("sum-capacity " + bad_field.string());
  CHECK(res.exit_code == 2);
  CHECK(res.err.find("gains") != std::string::npos);

  // wrong channel type for the verb
  const auto bc = write_file("bsc01.json", kBsc01);
  CHECK(run("sum-capacity " + bc.string()).exit_code == 2);

  // diagonal violation is named
  const auto diag = write_file("diag.json",
      R"({"type":"gaussian_ic","gains":[[2,1],[1,1]],"powers":[1,1]})");
  const auto dres = run("sum-capacity " + diag.string());
  CHECK(dres.exit_code == 2);
  CHECK(dres.err.find("diagonal") != std::string::npos);
}

TEST_CASE("json reports reparse and timestamps toggle") {
  const auto p = write_file("ones3.json", kOnes3);
  const auto with_ts = run("check-gaussian " + p.string());
  const json doc = json::parse(with_ts.out);
  CHECK(doc.contains("timestamp"));
  const auto without = run("check-gaussian " + p.string() + " --no-timestamp");
  CHECK(!json::parse(without.out).contains("timestamp"));
  // byte-stable across runs
  CHECK(without.out == run("check-gaussian " + p.string() + " --no-timestamp").out);
}

TEST_CASE("tolerance override changes the pass verdict") {
  const auto p = write_file("anti.json", kAntiDegraded);
  // absurdly loose gap tolerance turns the failed check into a pass
  const auto res = run("grid-gap " + p.string() + " --resolution 4 --tol gap=1.0");
  CHECK(res.exit_code == 0);
  CHECK(run("grid-gap " + p.string() + " --resolution 4 --tol bogus=1").exit_code == 2);
}
