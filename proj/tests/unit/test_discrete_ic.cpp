#include <doctest.h>

#include "near.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "../oracles/oracles.hpp"
#include "wcont/discrete_ic.hpp"
#include "wcont/infomeasures.hpp"
#include "wcont/transport.hpp"

using namespace wcont;

namespace {

std::vector<double> random_simplex(std::mt19937_64& gen, std::size_t k) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> w(k);
  double s = 0.0;
  for (auto& v : w) s += (v = -std::log1p(-u(gen)));
  for (auto& v : w) v /= s;
  return w;
}

TwoInputChannel additive_mod3(const std::vector<double>& noise) {
  std::vector<std::vector<std::vector<double>>> w(3, std::vector<std::vector<double>>(3, std::vector<double>(3)));
  for (int x = 0; x < 3; ++x)
    for (int a = 0; a < 3; ++a)
      for (int y = 0; y < 3; ++y) w[x][a][y] = noise[(y - x - a + 6) % 3];
  return TwoInputChannel(w);
}

TwoInputChannel ignore_x(const Channel& a_to_y, std::size_t kx) {
  std::vector<std::vector<std::vector<double>>> w(kx);
  for (auto& block : w)
    for (std::size_t a = 0; a < a_to_y.input_size(); ++a) block.push_back(a_to_y.row(a));
  return TwoInputChannel(w);
}

}  // namespace

TEST_CASE("Fano function") {
  CHECK(fano_fx(0.0, 4) == 0.0);
  CHECK(fano_fx(0.5, 2) == doctest::Approx(std::numbers::ln2));
  CHECK(fano_fx(1.0, 3) == doctest::Approx(std::numbers::ln2));
  CHECK(fano_fx(0.2, 3) == doctest::Approx(0.2 * std::log(2.0) + oracle::binary_entropy(0.2)));
}

TEST_CASE("entropy gap bound through dbar") {
  CHECK(entropy_gap_fano_ub(Pmf::uniform(2, 2), Pmf::uniform(2, 2)) == 0.0);
  std::mt19937_64 gen(8);
  for (int trial = 0; trial < 40; ++trial) {
    const Pmf p(random_simplex(gen, 4), 2, 2), q(random_simplex(gen, 4), 2, 2);
    CHECK(std::abs(shannon_entropy(p) - shannon_entropy(q)) <= entropy_gap_fano_ub(p, q) + 1e-12);
  }
  const Pmf far0 = Pmf::point_mass(index_encode(SymbolString{0, 0}, 3), 3, 2);
  const Pmf far1 = Pmf::point_mass(index_encode(SymbolString{1, 2}, 3), 3, 2);
  CHECK(entropy_gap_fano_ub(far0, far1) == doctest::Approx(2.0 * std::log(2.0)));
}

TEST_CASE("channel constant c") {
  CHECK(channel_log_ratio_c(ignore_x(Channel({{1.0 / 3, 1.0 / 3, 1.0 / 3}}), 2)) == 0.0);
  CHECK(channel_log_ratio_c(additive_mod3({0.8, 0.1, 0.1})) == doctest::Approx(std::log(8.0)));
  CHECK(std::isinf(channel_log_ratio_c(ignore_x(Channel({{0.5, 0.5, 0.0}}), 1))));
}

TEST_CASE("dbar bounds on the output") {
  const TwoInputChannel w = additive_mod3({0.7, 0.2, 0.1});
  const Pmf py = Pmf::uniform(3);
  const DbarBounds zero = prop_dbar_bounds(w, py, py, 0.0, 0.0);
  CHECK(zero.h_bound == 0.0);
  CHECK(zero.d_bound == 0.0);
  CHECK(zero.i_bound == 0.0);
  CHECK_THROWS_AS(prop_dbar_bounds(ignore_x(Channel({{0.5, 0.5, 0.0}}), 1), py, py, 0.1, 0.1), InvalidArgument);

  std::mt19937_64 gen(31);
  for (int trial = 0; trial < 30; ++trial) {
    const auto px = random_simplex(gen, 3), pa = random_simplex(gen, 3), pat = random_simplex(gen, 3);
    std::vector<double> y(3, 0.0), yt(3, 0.0);
    for (int x = 0; x < 3; ++x)
      for (int a = 0; a < 3; ++a)
        for (int j = 0; j < 3; ++j) {
          y[j] += px[x] * pa[a] * w(j, x, a);
          yt[j] += px[x] * pat[a] * w(j, x, a);
        }
    const Pmf p_y(y, 3), p_yt(yt, 3);
    const double d = oracle::tv(y, yt);
    const DbarBounds b = prop_dbar_bounds(w, p_y, p_yt, d, d);
    CHECK(std::abs(oracle::entropy(y) - oracle::entropy(yt)) <= b.h_bound + 1e-12);
    CHECK(oracle::kl(y, yt) + oracle::kl(yt, y) <= b.d_bound + 1e-12);
  }
}

TEST_CASE("Dobrushin coefficient") {
  CHECK(eta_tv(Channel::identity(3)) == 1.0);
  CHECK(eta_tv(Channel({{0.2, 0.8}, {0.2, 0.8}})) == 0.0);
  for (double d : {0.0, 0.1, 0.37, 0.5}) CHECK(eta_tv(Channel::bsc(d)) == doctest::Approx(1.0 - 2.0 * d));
  CHECK(eta_tv_two_input(ignore_x(Channel({{0.3, 0.7}, {0.3, 0.7}}), 2)) == 0.0);
  CHECK(eta_tv_two_input(ignore_x(Channel::bsc(0.15), 2)) == doctest::Approx(0.7));
  CHECK(eta_tv_two_input(additive_mod3({0.8, 0.1, 0.1})) == doctest::Approx(0.7));
}

TEST_CASE("KL contraction estimate") {
  const Pmf p0 = Pmf::uniform(2);
  CHECK_NEAR(eta_kl_two_input(ignore_x(Channel({{0.3, 0.7}, {0.3, 0.7}}), 2), p0, 40).value, 0.0, 1e-8);
  CHECK(eta_kl_two_input(ignore_x(Channel::identity(2), 2), p0, 40).value == doctest::Approx(1.0).epsilon(1e-9));
  for (double d : {0.1, 0.25}) {
    const EtaKlEstimate e = eta_kl_two_input(ignore_x(Channel::bsc(d), 1), p0);
    CHECK(e.value >= (1 - 2 * d) * (1 - 2 * d) - 1e-3);
    CHECK(e.value <= 1.0 - 2 * d + 1e-9);
  }
}

TEST_CASE("one-sided entropy bound for product references") {
  CHECK(chang_one_sided_ub(0.0, 3, 2) == 0.0);
  CHECK(chang_one_sided_ub(0.5, 1, 2) == doctest::Approx(std::numbers::ln2));
  std::mt19937_64 gen(41);
  for (int trial = 0; trial < 30; ++trial) {
    const Pmf p(random_simplex(gen, 9), 3, 2);
    const Pmf q = Pmf::product(std::vector<Pmf>{Pmf(random_simplex(gen, 3), 3), Pmf(random_simplex(gen, 3), 3)});
    CHECK(shannon_entropy(p) - shannon_entropy(q) <= chang_one_sided_ub(kl_discrete(p, q), 2, 3) + 1e-12);
  }
}

TEST_CASE("F_c envelope for the identity second stage") {
  const FcCurve c = fc_envelope(Channel::bsc(0.2), Channel::identity(2), 200);
  CHECK(c.grid_err > 0.0);
  for (const FcKnot& k : c.knots) CHECK(std::abs(k.fc - k.t) <= 2e-3);
  CHECK_FALSE(c.strict1);
}

TEST_CASE("F_c envelope when A is independent of X") {
  const FcCurve c = fc_envelope(Channel({{0.4, 0.6}, {0.4, 0.6}}), Channel::bsc(0.1), 200);
  for (const FcKnot& k : c.knots) CHECK(std::abs(k.fc - k.t) <= c.grid_err + 1e-12);
  CHECK_FALSE(c.strict2);
}

TEST_CASE("F_c envelope for a BSC chain") {
  const Channel bsc = Channel::bsc(0.1);
  const FcCurve c = fc_envelope(bsc, bsc, 200);
  CHECK(c.strict1);
  CHECK(c.strict2);
  CHECK(c.knots.front().t == 0.0);
  CHECK(c.knots.front().fc == 0.0);
  CHECK(c(0.0) == 0.0);
  for (std::size_t i = 1; i < c.knots.size(); ++i) {
    const FcKnot& k = c.knots[i];
    if (k.t < c.t_max) CHECK(k.fc < k.t);
    CHECK(k.fc >= c.knots[i - 1].fc);
  }
  const double margin = 0.3 - c(0.3);
  CHECK(margin > 0.0);
  const double ref = oracle::fc_pairs({bsc.row(0), bsc.row(1)}, {bsc.row(0), bsc.row(1)}, 0.3, 400);
  CHECK(c(0.3) <= ref + 1e-12);
  CHECK(c(0.3) >= ref - c.grid_err);
}

TEST_CASE("g from a linear envelope") {
  FcCurve lin;
  lin.knots = {{0.0, 0.0}, {1.0, 0.4}};
  lin.t_max = 1.0;
  lin.strict1 = lin.strict2 = true;
  const GCurve g = g_from_fc(lin);
  CHECK(g(0.0) == 0.0);
  CHECK(g(0.3) == doctest::Approx(0.3 / 0.6));
  CHECK(g(0.6) == doctest::Approx(1.0));
  CHECK(g(1.0) == doctest::Approx(1.4));
}

TEST_CASE("g from a BSC chain is monotone") {
  const Channel bsc = Channel::bsc(0.1);
  const GCurve g = g_from_fc(fc_envelope(bsc, bsc, 200));
  CHECK(g(0.0) == 0.0);
  for (std::size_t i = 1; i < g.knots.size(); ++i) CHECK(g.knots[i].g >= g.knots[i - 1].g);
}

TEST_CASE("g names the violated strictness condition") {
  CHECK_THROWS_WITH_AS(g_from_fc(fc_envelope(Channel::bsc(0.2), Channel::identity(2), 50)),
                       doctest::Contains("strict1"), InvalidArgument);
  CHECK_THROWS_WITH_AS(g_from_fc(fc_envelope(Channel({{0.4, 0.6}, {0.4, 0.6}}), Channel::bsc(0.1), 50)),
                       doctest::Contains("strict2"), InvalidArgument);
}

TEST_CASE("cyclic convolution") {
  const std::vector<double> a{0.5, 0.5, 0.0}, b{0.8, 0.1, 0.1};
  const auto c = cyclic_convolve(a, b);
  CHECK(c[0] == doctest::Approx(0.45));
  CHECK(c[1] == doctest::Approx(0.45));
  CHECK(c[2] == doctest::Approx(0.10));
}

TEST_CASE("ternary corner point") {
  const DiscreteCornerReport r = discrete_corner(Pmf({0.8, 0.1, 0.1}, 3));
  CHECK(r.theorem_applies);
  CHECK_NEAR(r.q_star, 0.5, 1e-5);
  CHECK_NEAR(r.p3[0], 0.45, 1e-6);
  CHECK_NEAR(r.p3[2], 0.10, 1e-12);
  // ln 3 - H(P3) and H(P3) - H(P2) at P3 = [0.45, 0.45, 0.1], in extended precision.
  CHECK(r.c2 == doctest::Approx(0.309883576245222076565).epsilon(1e-13));
  CHECK(r.c1_prime == doctest::Approx(0.149696852772710673413).epsilon(1e-13));
  CHECK(std::abs(r.c1_prime + r.c2 - (std::log(3.0) - oracle::entropy({0.8, 0.1, 0.1}))) <= 1e-12);
}

TEST_CASE("ternary corner point matches a grid search") {
  const std::vector<double> p2{0.5, 0.25, 0.25};
  const DiscreteCornerReport r = discrete_corner(Pmf(p2, 3));
  double best = -1.0, arg = 0.0;
  for (int k = 0; k <= 100000; ++k) {
    const double q = k / 100000.0;
    const std::vector<double> p3{(1 - q) * p2[0] + q * p2[2], (1 - q) * p2[1] + q * p2[0], (1 - q) * p2[2] + q * p2[1]};
    const double v = oracle::entropy(p3) - oracle::entropy(p2);
    if (v > best) best = v, arg = q;
  }
  CHECK_NEAR(r.q_star, arg, 1e-5);
  CHECK_NEAR(r.c2, best, 1e-9);
}

TEST_CASE("ternary corner special and invalid inputs") {
  const DiscreteCornerReport u = discrete_corner(Pmf::uniform(3));
  CHECK_FALSE(u.theorem_applies);
  CHECK(u.c2 == 0.0);
  CHECK(u.c1_prime == doctest::Approx(std::numbers::ln2));
  CHECK_FALSE(u.note.empty());
  CHECK_THROWS_AS(discrete_corner(Pmf({0.9, 0.1, 0.0}, 3)), InvalidArgument);
  CHECK_THROWS_AS(discrete_corner(Pmf::uniform(2)), InvalidArgument);
}
