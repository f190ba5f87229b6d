#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "wcont/cli.hpp"

using namespace wcont;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "wcont");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch() {
  const auto dir = std::filesystem::temp_directory_path() / "wcont_cli_test";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string put(const std::string& name, const std::string& text) {
  const auto path = scratch() / name;
  std::ofstream(path) << text;
  return path.string();
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("corners in bits") {
  const Run r = run({"corners", "--a", "0", "--b", "0", "--p1", "1", "--p2", "1", "--base", "bits"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["c1_prime"].get<double>() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(j["base"] == "bits");
}

TEST_CASE("bits output is nats output divided by ln 2") {
  const std::vector<std::string> args{"corners", "--a", "0.6", "--b", "1.3", "--p1", "2", "--p2", "5"};
  auto nats_args = args, bits_args = args;
  nats_args.insert(nats_args.end(), {"--base", "nats"});
  bits_args.insert(bits_args.end(), {"--base", "bits"});
  const auto n = nlohmann::json::parse(run(nats_args).out);
  const auto b = nlohmann::json::parse(run(bits_args).out);
  for (const char* key : {"c1", "c2", "c2_tilde", "c1_prime", "c2_prime"}) {
    CHECK(b[key].get<double>() == n[key].get<double>() / std::numbers::ln2);
  }
}

TEST_CASE("region gic writes the CSV") {
  const auto out = scratch() / "region.csv";
  const Run r = run({"region", "gic", "--a", "0.8", "--p1", "6", "--p2", "6", "--grid", "20", "--out", out.string(),
                     "--base", "nats", "--quiet"});
  REQUIRE(r.code == 0);
  const std::string csv = slurp(out);
  CHECK(csv.rfind("R1,R2,kind,base\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 41);
  CHECK(csv.find(",inner,nats") != std::string::npos);
  const Run again = run({"region", "gic", "--a", "0.8", "--p1", "6", "--p2", "6", "--grid", "20", "--base", "nats"});
  CHECK(again.out == csv);
}

TEST_CASE("region gic rejects a > 1") {
  const Run r = run({"region", "gic", "--a", "1.5", "--p1", "1", "--p2", "1"});
  CHECK(r.code == 1);
  CHECK(r.err.find("E1: a must lie in (0,1]") != std::string::npos);
}

TEST_CASE("usage errors") {
  CHECK(run({"corners", "--a", "0.5", "--p1", "1", "--p2", "1", "--bogus", "3"}).code == 1);
  CHECK(run({}).code == 1);
  CHECK(run({"region", "gic", "--a", "0.5", "--p1", "1", "--p2", "1", "--constraint", "peak"}).code == 1);
  const Run help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("verify") != std::string::npos);
}

TEST_CASE("verify writes a report") {
  const auto out = scratch() / "report.json";
  const Run r = run({"verify", "--family", "jpt", "--trials", "10", "--seed", "1", "--out", out.string(), "--quiet"});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(slurp(out));
  CHECK(j["trials_run"] == 10);
  CHECK(j["failures"].empty());
  CHECK(run({"verify", "--family", "nope", "--trials", "1"}).code == 1);
}

TEST_CASE("verify reports are byte-identical across runs") {
  const Run a = run({"verify", "--family", "marton_chain", "--trials", "15", "--seed", "3"});
  const Run b = run({"verify", "--family", "marton_chain", "--trials", "15", "--seed", "3", "--threads", "3"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("discrete measures") {
  const std::string p = put("p.json", R"({"alphabet_size":2,"n":1,"probs":[0.2,0.8]})");
  const std::string q = put("q.json", R"({"alphabet_size":2,"n":1,"probs":[0.5,0.5]})");
  CHECK(nlohmann::json::parse(run({"tv", "--p", p, "--q", q}).out)["tv"].get<double>() == doctest::Approx(0.3));
  CHECK(nlohmann::json::parse(run({"dbar", "--p", p, "--q", q}).out)["dbar"].get<double>() == doctest::Approx(0.3));
  CHECK(nlohmann::json::parse(run({"entropy", "--p", q}).out)["entropy"].get<double>() == doctest::Approx(1.0));
  CHECK(nlohmann::json::parse(run({"entropy", "--p", q, "--base", "nats"}).out)["entropy"].get<double>() ==
        doctest::Approx(std::numbers::ln2));
  CHECK(nlohmann::json::parse(run({"kl", "--p", p, "--q", q}).out)["kl"].get<double>() > 0.0);
  const std::string ch = put("bsc.json", R"({"input_size":2,"output_size":2,"rows":[[0.89,0.11],[0.11,0.89]]})");
  CHECK(nlohmann::json::parse(run({"mi", "--input", q, "--channel", ch, "--base", "nats"}).out)["mi"].get<double>() ==
        doctest::Approx(0.346631843641279157331));
}

TEST_CASE("invalid input files exit with code 3") {
  const std::string bad = put("bad.json", R"({"alphabet_size":2,"n":1,"probs":[0.5,0.48]})");
  const Run r = run({"entropy", "--p", bad});
  CHECK(r.code == 3);
  CHECK(r.err.rfind("E3:", 0) == 0);
  CHECK(run({"entropy", "--p", (scratch() / "missing.json").string()}).code == 3);
}

TEST_CASE("continuous measures") {
  const std::string g2 = put("g2.json", R"({"components":[{"w":1,"mean":0,"var":2}]})");
  const std::string g21 = put("g21.json", R"({"components":[{"w":1,"mean":0,"var":2.1}]})");
  const auto w = nlohmann::json::parse(run({"w2", "--p", g2, "--q", g21}).out);
  CHECK(w["w"]["value"].get<double>() == doctest::Approx(std::sqrt(2.1) - std::sqrt(2.0)).epsilon(1e-9));
  const auto h = nlohmann::json::parse(run({"dentropy", "--mixture", g2, "--base", "nats"}).out);
  CHECK(h["dentropy"]["value"].get<double>() ==
        doctest::Approx(0.5 * std::log(2 * std::numbers::pi * std::numbers::e * 2.0)));
}

TEST_CASE("envelope, corner and contraction commands") {
  const std::string bsc = put("bsc1.json", R"({"input_size":2,"output_size":2,"rows":[[0.9,0.1],[0.1,0.9]]})");
  const Run fc = run({"fc", "--channel-a", bsc, "--channel-b", bsc, "--grid", "50", "--quiet"});
  REQUIRE(fc.code == 0);
  CHECK(fc.out.rfind("t,Fc,grid_err\n0,0,", 0) == 0);

  const std::string p2 = put("p2.json", R"({"alphabet_size":3,"n":1,"probs":[0.8,0.1,0.1]})");
  const Run dc = run({"discrete-corner", "--p2", p2, "--base", "nats"});
  REQUIRE(dc.code == 0);
  CHECK(nlohmann::json::parse(dc.out)["q_star"].get<double>() == doctest::Approx(0.5).epsilon(1e-5));
  const std::string uni = put("u3.json", R"({"alphabet_size":3,"n":1,"probs":[0.3333333333333333,0.3333333333333333,0.3333333333333334]})");
  const Run du = run({"discrete-corner", "--p2", uni});
  CHECK(du.code == 3);
  CHECK(nlohmann::json::parse(du.out)["theorem_applies"] == false);

  const std::string w = put("w.json", R"({"x_size":1,"a_size":2,"y_size":2,"entries":[[[0.9,0.1],[0.1,0.9]]]})");
  const auto eta = nlohmann::json::parse(run({"eta", "--two-input", w, "--grid", "30"}).out);
  CHECK(eta["eta_tv"].get<double>() == doctest::Approx(0.8));
  CHECK(eta["eta_kl_grid"].get<double>() <= 0.8 + 1e-9);
}

TEST_CASE("regularity bounds command") {
  const std::string b = put("b.json", R"({"components":[{"w":0.5,"mean":-1,"var":0},{"w":0.5,"mean":1,"var":0}]})");
  const std::string u = put("u.json", R"({"components":[{"w":1,"mean":0.2,"var":1.5}]})");
  const Run r = run({"bounds", "regularity", "--b", b, "--u", u, "--sigma-sq", "1", "--power", "2", "--json", "--base", "nats"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["c1"].get<double>() == 3.0);
  CHECK(j["c2"].get<double>() == 4.0);
  CHECK(j["gradient_max_excess"].get<double>() <= 0.0);
  CHECK(j["delta_ppr"].get<double>() > 0.0);
  CHECK(j.contains("w2lip_delta"));
}
