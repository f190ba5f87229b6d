#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

#include "wcont/core.hpp"
#include "wcont/io.hpp"

using namespace wcont;

TEST_CASE("positional index encoding") {
  const SymbolString zero{0, 0}, five{1, 2}, max{2, 2, 2};
  CHECK(index_encode(zero, 3) == 0);
  CHECK(index_encode(five, 3) == 5);
  CHECK(index_encode(max, 3) == 26);
  CHECK(index_decode(5, 3, 2) == five);
  for (std::size_t i = 0; i < 27; ++i) CHECK(index_encode(index_decode(i, 3, 3), 3) == i);
  const SymbolString bad{3};
  CHECK_THROWS_AS(index_encode(bad, 3), InvalidArgument);
}

TEST_CASE("hamming distance") {
  CHECK(hamming_distance(SymbolString{0, 1}, SymbolString{0, 1}) == 0);
  CHECK(hamming_distance(SymbolString{0, 1}, SymbolString{1, 0}) == 2);
  CHECK(hamming_distance(SymbolString{0, 1, 2}, SymbolString{0, 2, 2}) == 1);
  CHECK_THROWS_AS(hamming_distance(SymbolString{0}, SymbolString{0, 1}), InvalidArgument);
}

TEST_CASE("product space size cap") {
  CHECK(product_size(10, 6) == 1'000'000);
  CHECK_THROWS_AS(product_size(10, 7), InvalidArgument);
  CHECK_THROWS_AS(product_size(0, 1), InvalidArgument);
}

TEST_CASE("pmf invariants") {
  CHECK_THROWS_WITH_AS(Pmf({0.5, 0.48}, 2), doctest::Contains("not normalized"), InvariantViolation);
  CHECK_THROWS_AS(Pmf({1.2, -0.2}, 2), InvariantViolation);
  CHECK_THROWS_AS(Pmf({0.5, 0.5}, 3), InvariantViolation);
  const Pmf u = Pmf::uniform(3);
  for (double v : u.probs()) CHECK(v == doctest::Approx(1.0 / 3.0));
  const Pmf b = Pmf::bernoulli(0.25);
  CHECK(b[1] == 0.25);
}

TEST_CASE("pmf product and marginals") {
  const Pmf a = Pmf::bernoulli(0.2);
  const Pmf b = Pmf::bernoulli(0.7);
  const Pmf letters[] = {a, b};
  const Pmf ab = Pmf::product(letters);
  CHECK(ab.size() == 4);
  CHECK(ab[index_encode(SymbolString{1, 0}, 2)] == doctest::Approx(0.2 * 0.3));
  CHECK(ab.marginal(0)[1] == doctest::Approx(0.2));
  CHECK(ab.marginal(1)[1] == doctest::Approx(0.7));
}

TEST_CASE("channel push and product push") {
  const Channel bsc = Channel::bsc(0.1);
  const Pmf out = bsc.push(Pmf::bernoulli(0.0));
  CHECK(out[1] == doctest::Approx(0.1));
  const Pmf x2 = Pmf::point_mass(0, 2, 2);
  const Pmf y2 = bsc.push_product(x2);
  CHECK(y2[0] == doctest::Approx(0.81));
  CHECK(y2[3] == doctest::Approx(0.01));
  CHECK_THROWS_AS(Channel({{0.5, 0.6}}), InvariantViolation);
}

TEST_CASE("two-input channel slices") {
  const TwoInputChannel w({{{1.0, 0.0}, {0.0, 1.0}}, {{0.5, 0.5}, {0.5, 0.5}}});
  CHECK(w.x_size() == 2);
  CHECK(w.a_size() == 2);
  CHECK(w.y_size() == 2);
  CHECK(w(1, 0, 1) == 1.0);
  CHECK(w.slice(1)(0, 0) == 0.5);
}

TEST_CASE("gaussian mixture convolution") {
  const auto atom = GaussianMixture1D::atoms(std::vector<double>{0.0}, std::vector<double>{1.0});
  CHECK(atom.convolve_gaussian(1.0) == GaussianMixture1D::gaussian(0.0, 1.0));
  CHECK(GaussianMixture1D::gaussian(0.0, 1.0).convolve_gaussian(1.0) == GaussianMixture1D::gaussian(0.0, 2.0));
  const auto two = GaussianMixture1D::atoms(std::vector<double>{-1.0, 2.0}, std::vector<double>{0.25, 0.75});
  const auto smooth = two.convolve_gaussian(0.5);
  REQUIRE(smooth.size() == 2);
  CHECK(smooth.components()[0].weight == 0.25);
  CHECK(smooth.components()[1].variance == 0.5);
  CHECK(two.mean() == doctest::Approx(1.25));
  CHECK(two.second_moment() == doctest::Approx(0.25 + 3.0));
  CHECK(smooth.second_moment() == doctest::Approx(3.25 + 0.5));
  CHECK(two.max_abs_mean() == 2.0);
}

TEST_CASE("gaussian mixture density, score and tails") {
  const auto g = GaussianMixture1D::gaussian(1.0, 4.0);
  CHECK(g.density(1.0) == doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi * 4.0)));
  CHECK(g.score(3.0) == doctest::Approx(-0.5));
  CHECK(g.cdf(1.0) == doctest::Approx(0.5));
  CHECK(g.survival(1.0 + 2.0 * 10.0) > 0.0);
  CHECK(g.cdf(-1e3) == 0.0);
}

TEST_CASE("base conversion") {
  CHECK(to_base(std::numbers::ln2, LogBase::bits) == doctest::Approx(1.0));
  CHECK(to_base(0.7, LogBase::nats) == 0.7);
  CHECK(parse_log_base("bits") == LogBase::bits);
  CHECK_THROWS_AS(parse_log_base("dits"), InvalidArgument);
}

TEST_CASE("json round trips") {
  const auto dir = std::filesystem::temp_directory_path() / "wcont_io_test";
  std::filesystem::create_directories(dir);
  const Pmf p = Pmf::from_weights({1.0, 2.0, 3.0, 4.0}, 2, 2);
  io::save_pmf(dir / "p.json", p);
  const Pmf back = io::load_pmf(dir / "p.json");
  CHECK(back.block_length() == 2);
  for (std::size_t i = 0; i < p.size(); ++i) CHECK(back[i] == p[i]);

  const Channel c = Channel::bsc(0.3);
  io::save_channel(dir / "c.json", c);
  CHECK(io::load_channel(dir / "c.json").row(1) == c.row(1));

  const auto u = io::pmf_from_json(nlohmann::json::parse(R"({"alphabet_size":3,"n":1,"probs":[0.3333333333333333,0.3333333333333333,0.3333333333333334]})"));
  CHECK(u[2] == doctest::Approx(1.0 / 3.0));
  CHECK_THROWS_WITH_AS(io::pmf_from_json(nlohmann::json::parse(R"({"alphabet_size":2,"n":1,"probs":[0.5,0.48]})")),
                       doctest::Contains("not normalized"), InvariantViolation);
  CHECK_THROWS_WITH_AS(io::pmf_from_json(nlohmann::json::parse(R"({"n":1,"probs":[1]})")),
                       doctest::Contains("alphabet_size"), InvariantViolation);

  const auto m = io::mixture_from_json(nlohmann::json::parse(R"({"components":[{"w":0.5,"mean":0,"var":1},{"w":0.5,"mean":1,"var":0}]})"));
  CHECK(m.has_atoms());
  CHECK(io::mixture_from_json(io::to_json(m)) == m);
  std::filesystem::remove_all(dir);
}

TEST_CASE("float formatting") {
  CHECK(io::format_float(0.5) == "0.5");
  CHECK(io::format_float(1.0 / 3.0) == "0.333333333333");
  CHECK(io::format_float(0.0) == "0");
}

TEST_CASE("region csv schema") {
  RegionCurve outer{CurveKind::outer, {{0.5, 0.25}}};
  RegionCurve inner{CurveKind::inner, {{std::numbers::ln2, 0.0}}};
  const RegionCurve curves[] = {outer, inner};
  CHECK(io::region_csv(curves, LogBase::nats) == "R1,R2,kind,base\n0.5,0.25,outer,nats\n0.69314718056,0,inner,nats\n");
  CHECK(io::region_csv(curves, LogBase::bits) ==
        "R1,R2,kind,base\n0.721347520444,0.360673760222,outer,bits\n1,0,inner,bits\n");
}
