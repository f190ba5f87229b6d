#include "wcont/discrete_ic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "wcont/infomeasures.hpp"
#include "wcont/transport.hpp"

namespace wcont {

double fano_fx(double x, std::size_t alphabet_size) {
  if (alphabet_size < 2) throw InvalidArgument("fano_fx: alphabet size must be at least 2");
  if (!(x >= 0.0 && x <= 1.0)) throw InvalidArgument("fano_fx: x must lie in [0,1]");
  return x * std::log(static_cast<double>(alphabet_size - 1)) + binary_entropy(x);
}

double entropy_gap_fano_ub(const Pmf& p, const Pmf& q) {
  const double d = std::clamp(dbar(p, q), 0.0, 1.0);
  return static_cast<double>(p.block_length()) * fano_fx(d, p.alphabet_size());
}

double channel_log_ratio_c(const TwoInputChannel& w) {
  double c = 0.0;
  for (const auto& per_x : w.entries()) {
    for (const auto& row : per_x) {
      const double hi = *std::max_element(row.begin(), row.end());
      const double lo = *std::min_element(row.begin(), row.end());
      if (lo <= 0.0) {
        if (hi > 0.0) return kInfinity;
        continue;
      }
      c = std::max(c, std::log(hi / lo));
    }
  }
  return c;
}

DbarBounds prop_dbar_bounds(const TwoInputChannel& w, const Pmf& p_y, const Pmf& p_ytilde, double dbar_y,
                            double mean_conditional_dbar) {
  if (p_y.alphabet_size() != w.y_size() || p_ytilde.alphabet_size() != w.y_size() ||
      p_y.block_length() != p_ytilde.block_length()) {
    throw InvalidArgument("prop_dbar_bounds: output pmfs must live on Y^n of the channel");
  }
  if (!(dbar_y >= 0.0) || !(mean_conditional_dbar >= 0.0)) {
    throw InvalidArgument("prop_dbar_bounds: distances must be non-negative");
  }
  const double c = channel_log_ratio_c(w);
  if (!std::isfinite(c)) throw InvalidArgument("prop_dbar_bounds: channel constant c is infinite (zero entries)");
  const double n = static_cast<double>(p_y.block_length());
  return {c * n * dbar_y, 2.0 * c * n * dbar_y, 2.0 * c * n * mean_conditional_dbar};
}

double eta_tv(const Channel& kernel) {
  double eta = 0.0;
  for (std::size_t x = 0; x < kernel.input_size(); ++x) {
    for (std::size_t x2 = x + 1; x2 < kernel.input_size(); ++x2) {
      eta = std::max(eta, tv(kernel.row(x), kernel.row(x2)));
    }
  }
  return eta;
}

double eta_tv_two_input(const TwoInputChannel& w) {
  double eta = 0.0;
  for (std::size_t x = 0; x < w.x_size(); ++x) eta = std::max(eta, eta_tv(w.slice(x)));
  return eta;
}

namespace {

/// Calls visit(counts) for every composition of `total` into `parts`
/// non-negative integers, in lexicographic order.
void for_each_composition(std::size_t total, std::size_t parts,
                          const std::function<void(const std::vector<std::size_t>&)>& visit) {
  std::vector<std::size_t> counts(parts, 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t slot, std::size_t left) {
    if (slot + 1 == parts) {
      counts[slot] = left;
      visit(counts);
      return;
    }
    for (std::size_t k = 0; k <= left; ++k) {
      counts[slot] = k;
      rec(slot + 1, left - k);
    }
  };
  rec(0, total);
}

std::vector<double> push_row(const Channel& ch, std::span<const double> input) {
  std::vector<double> out(ch.output_size(), 0.0);
  for (std::size_t x = 0; x < input.size(); ++x) {
    if (input[x] == 0.0) continue;
    for (std::size_t y = 0; y < out.size(); ++y) out[y] += input[x] * ch(y, x);
  }
  return out;
}

constexpr double kKlExclusion = 1e-6;

}  // namespace

EtaKlEstimate eta_kl_two_input(const TwoInputChannel& w, const Pmf& p0, std::size_t grid_resolution) {
  if (p0.block_length() != 1 || p0.size() != w.a_size()) {
    throw InvalidArgument("eta_kl_two_input: p0 must be a single-letter pmf on A");
  }
  for (double v : p0.probs()) {
    if (!(v > 0.0)) throw InvalidArgument("eta_kl_two_input: p0 must be strictly positive");
  }
  if (grid_resolution < 1) throw InvalidArgument("eta_kl_two_input: grid resolution must be positive");

  const std::size_t k = w.a_size();
  EtaKlEstimate best;
  best.q0.assign(p0.probs().begin(), p0.probs().end());
  if (k == 1) return best;

  for (std::size_t x = 0; x < w.x_size(); ++x) {
    const Channel ch = w.slice(x);
    const std::vector<double> ref_out = push_row(ch, p0.probs());
    auto ratio = [&](const std::vector<double>& q) -> double {
      const double den = kl_discrete(q, p0.probs());
      if (!(den >= kKlExclusion)) return -1.0;
      return kl_discrete(push_row(ch, q), ref_out) / den;
    };

    double local_best = -1.0;
    std::vector<double> local_q;
    std::vector<double> q(k);
    for_each_composition(grid_resolution, k, [&](const std::vector<std::size_t>& counts) {
      for (std::size_t i = 0; i < k; ++i) q[i] = static_cast<double>(counts[i]) / static_cast<double>(grid_resolution);
      const double r = ratio(q);
      if (r > local_best) {
        local_best = r;
        local_q = q;
      }
    });
    if (local_best < 0.0) continue;

    double step = 1.0 / static_cast<double>(grid_resolution);
    while (step > 1e-7) {
      bool moved = false;
      for (std::size_t i = 0; i < k && !moved; ++i) {
        for (std::size_t j = 0; j < k && !moved; ++j) {
          if (i == j || local_q[j] < step) continue;
          std::vector<double> cand = local_q;
          cand[i] += step;
          cand[j] -= step;
          if (cand[j] < 1e-15) cand[j] = 0.0;
          const double r = ratio(cand);
          if (r > local_best * (1.0 + 1e-12)) {
            local_best = r;
            local_q = std::move(cand);
            moved = true;
          }
        }
      }
      if (!moved) step *= 0.5;
    }

    if (local_best > best.value) {
      best.value = local_best;
      best.x = x;
      best.q0 = local_q;
    }
  }
  return best;
}

double chang_one_sided_ub(double kl_nats, std::size_t n, std::size_t alphabet_size) {
  if (!(kl_nats >= 0.0)) throw InvalidArgument("chang_one_sided_ub: kl must be non-negative");
  if (n == 0 || alphabet_size == 0) throw InvalidArgument("chang_one_sided_ub: n and alphabet size must be positive");
  return std::sqrt(2.0 * static_cast<double>(n) * kl_nats) * std::log(static_cast<double>(alphabet_size));
}

double FcCurve::operator()(double t) const {
  if (!(t >= 0.0)) throw InvalidArgument("F_c: t must be non-negative");
  if (knots.empty()) throw InvariantViolation("F_c: empty curve");
  if (t >= knots.back().t) return knots.back().fc;
  const auto it = std::upper_bound(knots.begin(), knots.end(), t, [](double v, const FcKnot& k) { return v < k.t; });
  const FcKnot& hi = *it;
  const FcKnot& lo = *(it - 1);
  if (hi.t == lo.t) return hi.fc;
  return lo.fc + (hi.fc - lo.fc) * (t - lo.t) / (hi.t - lo.t);
}

namespace {

double conditional_entropy(std::span<const double> px, const Channel& ch) {
  // H(X|Y) = H(X) + H(Y|X) - H(Y)
  double h_y_given_x = 0.0;
  for (std::size_t x = 0; x < px.size(); ++x) {
    if (px[x] > 0.0) h_y_given_x += px[x] * shannon_entropy(ch.row(x));
  }
  return std::max(0.0, shannon_entropy(px) + h_y_given_x - shannon_entropy(push_row(ch, px)));
}

Channel compose(const Channel& first, const Channel& second) {
  std::vector<std::vector<double>> rows;
  rows.reserve(first.input_size());
  for (std::size_t x = 0; x < first.input_size(); ++x) rows.push_back(push_row(second, first.row(x)));
  return Channel(std::move(rows));
}

double min_pairwise(const Channel& ch, const std::function<double(const std::vector<double>&, const std::vector<double>&)>& f) {
  double m = 1.0;
  for (std::size_t i = 0; i < ch.input_size(); ++i)
    for (std::size_t j = i + 1; j < ch.input_size(); ++j) m = std::min(m, f(ch.row(i), ch.row(j)));
  return m;
}

double cross(const FcKnot& o, const FcKnot& a, const FcKnot& b) {
  return (a.t - o.t) * (b.fc - o.fc) - (a.fc - o.fc) * (b.t - o.t);
}

}  // namespace

FcCurve fc_envelope(const Channel& a_given_x, const Channel& b_given_a, std::size_t grid) {
  if (grid == 0) throw InvalidArgument("fc_envelope: empty grid");
  if (a_given_x.output_size() != b_given_a.input_size()) {
    throw InvalidArgument("fc_envelope: output alphabet of P_A|X must match input alphabet of P_B|A");
  }
  const Channel b_given_x = compose(a_given_x, b_given_a);
  const std::size_t k = a_given_x.input_size();
  const double step = 1.0 / static_cast<double>(grid);

  auto pair_at = [&](std::span<const double> px) -> FcKnot {
    const double t = conditional_entropy(px, b_given_x);
    const double y = std::min(conditional_entropy(px, a_given_x), t);
    return {t, y};
  };

  std::vector<FcKnot> points{{0.0, 0.0}};
  double omega = 0.0;
  std::vector<double> px(k);
  std::vector<double> nb(k);
  std::vector<double> mid(k);
  for_each_composition(grid, k, [&](const std::vector<std::size_t>& counts) {
    for (std::size_t i = 0; i < k; ++i) px[i] = static_cast<double>(counts[i]) * step;
    const FcKnot here = pair_at(px);
    points.push_back(here);
    for (std::size_t i = 0; i < k; ++i) {
      if (counts[i] == 0) continue;
      for (std::size_t j = 0; j < k; ++j) {
        if (j == i) continue;
        nb = px;
        nb[i] -= step;
        nb[j] += step;
        nb[i] = std::max(nb[i], 0.0);
        for (std::size_t m = 0; m < k; ++m) mid[m] = 0.5 * (px[m] + nb[m]);
        const FcKnot there = pair_at(nb);
        const FcKnot middle = pair_at(mid);
        const double t_lo = std::min({here.t, there.t, middle.t});
        const double t_hi = std::max({here.t, there.t, middle.t});
        const double y_lo = std::min({here.fc, there.fc, middle.fc});
        const double y_hi = std::max({here.fc, there.fc, middle.fc});
        omega = std::max({omega, t_hi - t_lo, y_hi - y_lo});
      }
    }
  });

  std::sort(points.begin(), points.end(), [](const FcKnot& a, const FcKnot& b) {
    return a.t < b.t || (a.t == b.t && a.fc > b.fc);
  });
  std::vector<FcKnot> hull;
  for (const FcKnot& p : points) {
    if (!hull.empty() && p.t == hull.back().t) continue;
    while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), p) >= 0.0) hull.pop_back();
    hull.push_back(p);
  }

  FcCurve curve;
  curve.t_max = points.back().t;
  const auto peak = std::max_element(hull.begin(), hull.end(), [](const FcKnot& a, const FcKnot& b) {
    return a.fc < b.fc;
  });
  curve.knots.assign(hull.begin(), peak + 1);
  if (curve.knots.back().t < curve.t_max) curve.knots.push_back({curve.t_max, curve.knots.back().fc});
  curve.grid_err = 2.0 * omega;

  curve.strict1_margin = b_given_a.input_size() < 2 ? 1.0 : min_pairwise(b_given_a, [](const auto& u, const auto& v) {
    double overlap = 0.0;
    for (std::size_t y = 0; y < u.size(); ++y) overlap += std::min(u[y], v[y]);
    return overlap;
  });
  curve.strict2_margin = a_given_x.input_size() < 2
                             ? 1.0
                             : min_pairwise(a_given_x, [](const auto& u, const auto& v) { return tv(u, v); });
  curve.strict1 = curve.strict1_margin > 1e-9;
  curve.strict2 = curve.strict2_margin > 1e-9;
  return curve;
}

double GCurve::operator()(double eps) const {
  if (!(eps >= 0.0)) throw InvalidArgument("g: eps must be non-negative");
  if (knots.empty()) throw InvariantViolation("g: empty curve");
  if (eps >= knots.back().eps) return eps + fc_at_t_max;
  const auto it = std::upper_bound(knots.begin(), knots.end(), eps, [](double v, const GKnot& k) { return v < k.eps; });
  const GKnot& hi = *it;
  const GKnot& lo = *(it - 1);
  return lo.g + (hi.g - lo.g) * (eps - lo.eps) / (hi.eps - lo.eps);
}

GCurve g_from_fc(const FcCurve& curve) {
  if (!curve.strict1) {
    throw InvalidArgument("g_from_fc: condition strict1 violated (two rows of P_B|A are mutually singular)");
  }
  if (!curve.strict2) throw InvalidArgument("g_from_fc: condition strict2 violated (two rows of P_A|X coincide)");
  if (curve.knots.empty()) throw InvariantViolation("g_from_fc: empty curve");

  GCurve g;
  g.fc_at_t_max = curve.knots.back().fc;
  g.knots.push_back({0.0, 0.0});
  for (const FcKnot& k : curve.knots) {
    const double eps = k.t - k.fc;
    if (eps > g.knots.back().eps && k.t > g.knots.back().g) g.knots.push_back({eps, k.t});
  }
  return g;
}

std::vector<double> cyclic_convolve(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) throw InvalidArgument("cyclic_convolve: sizes must match");
  const std::size_t m = a.size();
  std::vector<double> out(m, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) out[(i + j) % m] += a[i] * b[j];
  return out;
}

DiscreteCornerReport discrete_corner(const Pmf& p2) {
  if (p2.block_length() != 1 || p2.size() != 3) throw InvalidArgument("discrete_corner: P2 must be a pmf on {0,1,2}");
  for (double v : p2.probs()) {
    if (!(v > 0.0)) throw InvalidArgument("discrete_corner: P2 has a zero entry (channel constant c is infinite)");
  }

  DiscreteCornerReport report;
  const bool uniform =
      std::all_of(p2.probs().begin(), p2.probs().end(), [](double v) { return std::abs(v - 1.0 / 3.0) <= 1e-12; });
  if (uniform) {
    report.c2 = 0.0;
    report.c1_prime = std::numbers::ln2;
    report.q_star = 0.0;
    report.p3 = Pmf::uniform(3);
    report.theorem_applies = false;
    report.note = "uniform P2: X2 is independent of Y2, so C2 = 0 and C1' = ln 2";
    return report;
  }

  const double h2 = shannon_entropy(p2);
  auto mixed = [&](double q) {
    const double bern[3] = {1.0 - q, q, 0.0};
    return cyclic_convolve(bern, p2.probs());
  };
  const ScalarMax best = capacity_1d_concave([&](double q) { return shannon_entropy(mixed(q)) - h2; });
  const std::vector<double> p3 = mixed(best.argmax);
  report.q_star = best.argmax;
  report.p3 = Pmf::from_weights(p3, 3);
  report.c2 = best.value;
  report.c1_prime = std::log(3.0) - shannon_entropy(p3);
  report.fallback_grid = best.fallback_grid;
  return report;
}

}  // namespace wcont
