#include <doctest.h>

#include <cmath>

#include "wcont/discrete_ic.hpp"
#include "wcont/rng.hpp"
#include "wcont/verify.hpp"

using namespace wcont;

TEST_CASE("family names round trip") {
  for (Family f : all_families()) CHECK(parse_family(to_string(f)) == f);
  CHECK(all_families().size() == 10);
  CHECK_THROWS_AS(parse_family("nope"), InvalidArgument);
}

TEST_CASE("seed splitting") {
  CHECK(trial_seed(1, "jpt", 0) != trial_seed(1, "jpt", 1));
  CHECK(trial_seed(1, "jpt", 0) != trial_seed(1, "fc", 0));
  CHECK(trial_seed(9, "ppr", 4) == trial_seed(9, "ppr", 4));
  std::uint64_t state = 0;
  CHECK(splitmix64(state) == 0xE220A8397B1DCDAFULL);
  Fnv1a h;
  h.add(std::string_view("a"));
  CHECK(h.value() == 0xAF63DC4C8601EC8CULL);
}

TEST_CASE("rng draws") {
  Rng a(5), b(5);
  for (int i = 0; i < 10; ++i) CHECK(a.uniform() == b.uniform());
  const auto w = a.dirichlet(4);
  double s = 0.0;
  for (double v : w) {
    CHECK(v >= 0.0);
    s += v;
  }
  CHECK(s == doctest::Approx(1.0));
  for (int i = 0; i < 100; ++i) CHECK(a.index(3) < 3);
}

TEST_CASE("trials are reproducible and digest their instance") {
  for (Family f : {Family::jpt, Family::fc, Family::gic_corner}) {
    const TrialResult a = run_trial(f, 3, 2);
    const TrialResult b = run_trial(f, 3, 2);
    CHECK(a.digest == b.digest);
    REQUIRE(a.outcomes.size() == b.outcomes.size());
    for (std::size_t i = 0; i < a.outcomes.size(); ++i) CHECK(a.outcomes[i].lhs == b.outcomes[i].lhs);
    CHECK(run_trial(f, 3, 3).digest != a.digest);
  }
}

TEST_CASE("reports do not depend on thread count") {
  TrialConfig one{.seed = 4, .trials = 12, .family = Family::dbar_props, .threads = 1};
  TrialConfig many = one;
  many.threads = 4;
  CHECK(report_text(run_family(one)) == report_text(run_family(many)));
}

TEST_CASE("exact families pass") {
  for (Family f : {Family::jpt, Family::dbar_props, Family::marton_chain, Family::fc, Family::gic_corner,
                   Family::discrete_corner}) {
    const VerifyReport r = run_family({.seed = 7, .trials = 25, .family = f});
    CAPTURE(to_string(f));
    CHECK(r.failures.empty());
    CHECK(r.certified);
    CHECK(r.trials_run == 25);
    CHECK(r.min_slack >= -r.tolerance);
  }
}

TEST_CASE("continuous families pass with certified slack") {
  for (Family f : {Family::ppr, Family::w2lip, Family::best, Family::cor_best}) {
    const VerifyReport r = run_family({.seed = 7, .trials = 4, .family = f});
    CAPTURE(to_string(f));
    CHECK(r.failures.empty());
    CHECK(r.certified);
    CHECK(r.total_error > 0.0);
  }
}

TEST_CASE("shrinking every right-hand side produces failures") {
  const VerifyReport r = run_family({.seed = 1, .trials = 20, .family = Family::jpt, .rhs_scale = 0.01});
  CHECK_FALSE(r.failures.empty());
  for (std::size_t i = 1; i < r.failures.size(); ++i) CHECK(r.failures[i - 1].trial <= r.failures[i].trial);
}

TEST_CASE("generated instances respect their construction caps") {
  const VerifyReport dp = run_family({.seed = 2, .trials = 30, .family = Family::dbar_props});
  const VerifyReport wl = run_family({.seed = 2, .trials = 5, .family = Family::w2lip});
  bool saw_floor = false, saw_cap = false;
  for (const auto& c : dp.checks) saw_floor |= c.check == "c_floor" && c.failures == 0 && c.evaluations == 30;
  for (const auto& c : wl.checks) saw_cap |= c.check == "moment_cap" && c.failures == 0 && c.min_slack >= -1e-12;
  CHECK(saw_floor);
  CHECK(saw_cap);
}

TEST_CASE("report JSON schema") {
  const VerifyReport r = run_family({.seed = 1, .trials = 3, .family = Family::discrete_corner});
  const nlohmann::json j = to_json(r);
  for (const char* key : {"family", "seed", "trials_run", "tolerance", "failures", "min_slack", "certified",
                          "total_error", "checks", "warnings"}) {
    CHECK(j.contains(key));
  }
  CHECK(j["family"] == "discrete_corner");
  CHECK(report_text(r).back() == '\n');
  CHECK(family_tolerance(Family::discrete_corner) == 1e-12);
  CHECK(family_tolerance(Family::jpt) == 1e-10);
  CHECK(family_tolerance(Family::ppr) == 1e-9);
}

TEST_CASE("invalid configurations") {
  CHECK_THROWS_AS(run_family({.seed = 1, .trials = 0, .family = Family::jpt}), InvalidArgument);
}
