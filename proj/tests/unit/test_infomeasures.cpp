#include <doctest.h>

#include "near.hpp"

#include <cmath>
#include <numbers>

#include "../oracles/oracles.hpp"
#include "wcont/infomeasures.hpp"

using namespace wcont;

TEST_CASE("Shannon entropy") {
  CHECK(shannon_entropy(Pmf::point_mass(1, 3)) == 0.0);
  CHECK(shannon_entropy(Pmf::uniform(5)) == doctest::Approx(std::log(5.0)));
  CHECK(shannon_entropy(Pmf({0.5, 0.25, 0.25}, 3)) == doctest::Approx(1.5 * std::numbers::ln2));
  CHECK(binary_entropy(0.5) == doctest::Approx(std::numbers::ln2));
  CHECK(binary_entropy(0.0) == 0.0);
}

TEST_CASE("discrete KL") {
  CHECK(kl_discrete(Pmf::uniform(3), Pmf::uniform(3)) == 0.0);
  CHECK(kl_discrete(Pmf::bernoulli(1.0), Pmf::bernoulli(0.5)) == doctest::Approx(std::numbers::ln2));
  CHECK(std::isinf(kl_discrete(Pmf::bernoulli(0.3), Pmf::bernoulli(0.0))));
  const Pmf p({0.1, 0.6, 0.3}, 3), q({0.3, 0.3, 0.4}, 3);
  CHECK(kl_discrete(p, q) == doctest::Approx(oracle::kl({0.1, 0.6, 0.3}, {0.3, 0.3, 0.4})));
}

TEST_CASE("mutual information") {
  CHECK(mutual_info_discrete(Pmf::uniform(2), Channel({{0.3, 0.7}, {0.3, 0.7}})) == doctest::Approx(0.0).scale(1e-15));
  CHECK(mutual_info_discrete(Pmf::uniform(4), Channel::identity(4)) == doctest::Approx(std::log(4.0)));
  // ln 2 - h_b(0.11), evaluated in extended precision.
  CHECK(mutual_info_discrete(Pmf::uniform(2), Channel::bsc(0.11)) ==
        doctest::Approx(0.346631843641279157331).epsilon(1e-14));
  const double joint = oracle::entropy({0.445, 0.055, 0.055, 0.445});
  CHECK(mutual_info_discrete(Pmf::uniform(2), Channel::bsc(0.11)) ==
        doctest::Approx(2 * std::numbers::ln2 - joint).epsilon(1e-13));
}

TEST_CASE("differential entropy") {
  for (double var : {0.25, 1.0, 7.0}) {
    const Estimate e = diff_entropy_1d(GaussianMixture1D::gaussian(0.5, var));
    CHECK(e.certified);
    CHECK_NEAR(e.value, 0.5 * std::log(2 * std::numbers::pi * std::numbers::e * var), 1e-9);
    CHECK(gaussian_entropy(var) == doctest::Approx(e.value).epsilon(1e-9));
  }
  CHECK(gaussian_entropy(2.0, 3) == doctest::Approx(1.5 * std::log(2 * std::numbers::pi * std::numbers::e * 2.0)));

  const auto near = GaussianMixture1D({{0.5, -1e-6, 1.0}, {0.5, 1e-6, 1.0}});
  CHECK(diff_entropy_1d(near).value == doctest::Approx(0.5 * std::log(2 * std::numbers::pi * std::numbers::e)).epsilon(1e-10));

  const auto mix = GaussianMixture1D({{0.5, 0.0, 1.0}, {0.5, 0.0, 2.0}});
  const Estimate e = diff_entropy_1d(mix);
  CHECK(e.certified);
  const double grid = oracle::diff_entropy_riemann(oracle::components(mix), -40, 40, 1e-4);
  CHECK_NEAR(e.value, grid, 1e-6);
  CHECK_NEAR(e.value, 1.61973227277816509316, 1e-9);
}

TEST_CASE("differential entropy rejects atoms") {
  const auto atoms = GaussianMixture1D::atoms(std::vector<double>{0.0}, std::vector<double>{1.0});
  CHECK_THROWS_AS(diff_entropy_1d(atoms), InvalidArgument);
}

TEST_CASE("continuous KL") {
  const auto g = GaussianMixture1D::gaussian(0, 1);
  CHECK(kl_1d(g, g).value == 0.0);
  const Estimate e = kl_1d(g, GaussianMixture1D::gaussian(0, 2));
  CHECK(e.value == doctest::Approx(0.5 * (0.5 - 1.0 + std::log(2.0))).epsilon(1e-10));
  const auto mix = GaussianMixture1D({{0.5, 0.0, 1.0}, {0.5, 0.0, 2.0}});
  const Estimate bounded = kl_1d(GaussianMixture1D::gaussian(0, 2), mix);
  CHECK(bounded.value <= std::numbers::ln2);
  const double riemann =
      oracle::kl_riemann(oracle::components(GaussianMixture1D::gaussian(0, 2)), oracle::components(mix), -40, 40, 1e-4);
  CHECK_NEAR(bounded.value, riemann, 1e-6);
}

TEST_CASE("one-dimensional concave maximization") {
  const ScalarMax m = capacity_1d_concave([](double q) { return -(q - 0.3) * (q - 0.3); });
  CHECK_NEAR(m.argmax, 0.3, 1e-7);
  CHECK_FALSE(m.fallback_grid);
  const ScalarMax sym = capacity_1d_concave([](double q) { return binary_entropy(q); });
  CHECK_NEAR(sym.argmax, 0.5, 1e-7);
  const ScalarMax bumpy = capacity_1d_concave([](double q) { return std::sin(20.0 * q) + q; });
  CHECK(bumpy.fallback_grid);
}
