#include "wcont/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <queue>

#include "wcont/discrete_ic.hpp"

namespace wcont {

CostMatrix hamming_cost(std::size_t alphabet_size, std::size_t n) {
  const std::size_t size = product_size(alphabet_size, n);
  CostMatrix c(size, size);
  std::vector<SymbolString> words;
  words.reserve(size);
  for (std::size_t i = 0; i < size; ++i) words.push_back(index_decode(i, alphabet_size, n));
  for (std::size_t i = 0; i < size; ++i)
    for (std::size_t j = 0; j < size; ++j)
      c(i, j) = static_cast<double>(hamming_distance(words[i], words[j])) / static_cast<double>(n);
  return c;
}

namespace {

/// Transportation simplex on a spanning-tree basis of m + n - 1 cells.
/// Nodes 0..m-1 are rows, m..m+n-1 are columns.
class TransportationSimplex {
 public:
  TransportationSimplex(std::span<const double> mu, std::span<const double> nu, const CostMatrix& cost)
      : m_(mu.size()), n_(nu.size()), cost_(cost), flow_(m_, n_), basic_(m_ * n_, false), u_(m_), v_(n_) {
    double scale = 0.0;
    for (double c : cost.data) scale = std::max(scale, std::abs(c));
    eps_ = 1e-12 * (1.0 + scale);
    northwest_corner(mu, nu);
  }

  CouplingPlan solve() {
    const std::size_t max_pivots = 1000 + 50 * (m_ + n_) * (m_ + n_) + 10 * m_ * n_;
    std::size_t pivots = 0;
    while (true) {
      compute_potentials();
      const auto entering = bland_entering();
      if (!entering) break;
      if (++pivots > max_pivots) throw NumericFailure("ot_exact: pivot budget exhausted");
      pivot(*entering);
    }
    CouplingPlan plan;
    plan.joint = flow_;
    plan.cost_value = 0.0;
    for (std::size_t i = 0; i < m_; ++i)
      for (std::size_t j = 0; j < n_; ++j) plan.cost_value += flow_(i, j) * cost_(i, j);
    plan.phi = u_;
    plan.psi = v_;
    plan.pivots = pivots;
    return plan;
  }

 private:
  void northwest_corner(std::span<const double> mu, std::span<const double> nu) {
    std::vector<double> supply(mu.begin(), mu.end());
    std::vector<double> demand(nu.begin(), nu.end());
    std::size_t i = 0;
    std::size_t j = 0;
    while (true) {
      const double x = std::max(0.0, std::min(supply[i], demand[j]));
      flow_(i, j) = x;
      basic_[i * n_ + j] = true;
      supply[i] -= x;
      demand[j] -= x;
      if (i == m_ - 1 && j == n_ - 1) break;
      if (i == m_ - 1) {
        ++j;
      } else if (j == n_ - 1) {
        ++i;
      } else if (supply[i] <= demand[j]) {
        ++i;
      } else {
        ++j;
      }
    }
  }

  std::vector<std::vector<std::size_t>> adjacency() const {
    std::vector<std::vector<std::size_t>> adj(m_ + n_);
    for (std::size_t cell = 0; cell < m_ * n_; ++cell) {
      if (!basic_[cell]) continue;
      adj[cell / n_].push_back(cell);
      adj[m_ + cell % n_].push_back(cell);
    }
    return adj;
  }

  std::size_t other_end(std::size_t cell, std::size_t node) const {
    const std::size_t row = cell / n_;
    const std::size_t col = m_ + cell % n_;
    return node == row ? col : row;
  }

  void compute_potentials() {
    const auto adj = adjacency();
    std::vector<bool> seen(m_ + n_, false);
    std::vector<double> pot(m_ + n_, 0.0);
    std::queue<std::size_t> todo;
    todo.push(0);
    seen[0] = true;
    while (!todo.empty()) {
      const std::size_t node = todo.front();
      todo.pop();
      for (std::size_t cell : adj[node]) {
        const std::size_t next = other_end(cell, node);
        if (seen[next]) continue;
        seen[next] = true;
        pot[next] = cost_.data[cell] - pot[node];
        todo.push(next);
      }
    }
    for (std::size_t i = 0; i < m_; ++i) u_[i] = pot[i];
    for (std::size_t j = 0; j < n_; ++j) v_[j] = pot[m_ + j];
  }

  std::optional<std::size_t> bland_entering() const {
    for (std::size_t cell = 0; cell < m_ * n_; ++cell) {
      if (basic_[cell]) continue;
      const double reduced = cost_.data[cell] - u_[cell / n_] - v_[cell % n_];
      if (reduced < -eps_) return cell;
    }
    return std::nullopt;
  }

  void pivot(std::size_t entering) {
    const auto adj = adjacency();
    const std::size_t start = entering / n_;
    const std::size_t goal = m_ + entering % n_;
    // Tree path from the entering row to the entering column.
    std::vector<std::size_t> via(m_ + n_, std::numeric_limits<std::size_t>::max());
    std::vector<bool> seen(m_ + n_, false);
    std::queue<std::size_t> todo;
    todo.push(start);
    seen[start] = true;
    while (!todo.empty() && !seen[goal]) {
      const std::size_t node = todo.front();
      todo.pop();
      for (std::size_t cell : adj[node]) {
        const std::size_t next = other_end(cell, node);
        if (seen[next]) continue;
        seen[next] = true;
        via[next] = cell;
        todo.push(next);
      }
    }
    // Walk back from the column: alternating -, +, -, ... ending with - at the row.
    std::vector<std::size_t> minus;
    std::vector<std::size_t> plus;
    std::size_t node = goal;
    bool is_minus = true;
    while (node != start) {
      const std::size_t cell = via[node];
      (is_minus ? minus : plus).push_back(cell);
      is_minus = !is_minus;
      node = other_end(cell, node);
    }
    // Leaving cell: smallest flow, ties to the lowest cell index.
    std::size_t leaving = minus.front();
    for (std::size_t cell : minus) {
      const double f = flow_.data[cell];
      const double best = flow_.data[leaving];
      if (f < best || (f == best && cell < leaving)) leaving = cell;
    }
    const double theta = flow_.data[leaving];
    for (std::size_t cell : minus) flow_.data[cell] = std::max(0.0, flow_.data[cell] - theta);
    for (std::size_t cell : plus) flow_.data[cell] += theta;
    flow_.data[leaving] = 0.0;
    basic_[leaving] = false;
    flow_.data[entering] = theta;
    basic_[entering] = true;
  }

  std::size_t m_;
  std::size_t n_;
  const CostMatrix& cost_;
  Matrix flow_;
  std::vector<bool> basic_;
  std::vector<double> u_;
  std::vector<double> v_;
  double eps_ = 0.0;
};

}  // namespace

CouplingPlan ot_exact(std::span<const double> mu, std::span<const double> nu, const CostMatrix& cost) {
  if (mu.empty() || nu.empty()) throw InvalidArgument("ot_exact: empty marginal");
  if (cost.rows != mu.size() || cost.cols != nu.size()) throw InvalidArgument("ot_exact: cost dimension mismatch");
  for (double c : cost.data) {
    if (!std::isfinite(c)) throw InvalidArgument("ot_exact: non-finite cost entry");
  }
  return TransportationSimplex(mu, nu, cost).solve();
}

CouplingPlan ot_exact(const Pmf& mu, const Pmf& nu, const CostMatrix& cost) {
  return ot_exact(mu.probs(), nu.probs(), cost);
}

DualityGap certify(const CouplingPlan& plan, std::span<const double> mu, std::span<const double> nu,
                   const CostMatrix& cost) {
  DualityGap gap;
  double dual = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) dual += plan.phi[i] * mu[i];
  for (std::size_t j = 0; j < nu.size(); ++j) dual += plan.psi[j] * nu[j];
  gap.objective_gap = std::abs(dual - plan.cost_value);
  for (std::size_t i = 0; i < mu.size(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < nu.size(); ++j) {
      gap.max_dual_violation = std::max(gap.max_dual_violation, plan.phi[i] + plan.psi[j] - cost(i, j));
      row += plan.joint(i, j);
      if (plan.joint(i, j) < 0.0) gap.max_marginal_error = std::max(gap.max_marginal_error, -plan.joint(i, j));
    }
    gap.max_marginal_error = std::max(gap.max_marginal_error, std::abs(row - mu[i]));
  }
  for (std::size_t j = 0; j < nu.size(); ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) col += plan.joint(i, j);
    gap.max_marginal_error = std::max(gap.max_marginal_error, std::abs(col - nu[j]));
  }
  return gap;
}

double dbar(const Pmf& p, const Pmf& q) {
  if (p.alphabet_size() != q.alphabet_size() || p.block_length() != q.block_length()) {
    throw InvalidArgument("dbar: pmfs must share alphabet and block length");
  }
  const std::size_t k = p.alphabet_size();
  const std::size_t n = p.block_length();
  std::size_t pairs = 1;
  for (std::size_t j = 0; j < 2 * n; ++j) {
    pairs *= k;
    if (pairs > kMaxProductSize) {
      throw InvalidArgument("dbar: instance too large for exact transport (|X|^(2n) > 1e6); use dbar_tensorize_ub");
    }
  }
  const double value = ot_exact(p, q, hamming_cost(k, n)).cost_value;
  return std::clamp(value, 0.0, 1.0);
}

double tv(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw InvalidArgument("tv: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return 0.5 * s;
}

double tv(const Pmf& p, const Pmf& q) { return tv(p.probs(), q.probs()); }

// ---------------------------------------------------------------------------

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

double phi_cdf(double z) { return 0.5 * std::erfc(-z * kInvSqrt2); }

/// Exact W_p^p between two purely atomic laws by merging their quantile steps.
double atomic_wp_power(const GaussianMixture1D& p, const GaussianMixture1D& q, int order) {
  auto sorted = [](const GaussianMixture1D& m) {
    std::vector<std::pair<double, double>> a;
    for (const auto& c : m.components())
      if (c.weight > 0.0) a.emplace_back(c.mean, c.weight);
    std::ranges::sort(a);
    return a;
  };
  const auto a = sorted(p);
  const auto b = sorted(q);
  std::size_t i = 0;
  std::size_t j = 0;
  double ra = a[0].second;
  double rb = b[0].second;
  double total = 0.0;
  while (i < a.size() && j < b.size()) {
    const double du = std::min(ra, rb);
    total += du * std::pow(std::abs(a[i].first - b[j].first), order);
    ra -= du;
    rb -= du;
    if (ra <= 1e-15 && i + 1 < a.size()) {
      ra += a[++i].second;
    } else if (ra <= 1e-15) {
      ++i;
    }
    if (rb <= 1e-15 && j + 1 < b.size()) {
      rb += b[++j].second;
    } else if (rb <= 1e-15) {
      ++j;
    }
  }
  return total;
}

}  // namespace

double mixture_quantile_probit(const GaussianMixture1D& m, double z) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& c : m.components()) {
    if (c.weight == 0.0) continue;
    const double x = c.mean + std::sqrt(c.variance) * z;
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  if (hi - lo <= 0.0) return lo;
  const bool lower = z <= 0.0;
  const double target = phi_cdf(lower ? z : -z);
  // g(x) is increasing in x and changes sign on [lo, hi].
  auto g = [&](double x) { return lower ? m.cdf(x) - target : target - m.survival(x); };
  if (g(lo) >= 0.0) return lo;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (g(mid) >= 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
    if (hi - lo <= 1e-15 * std::max(1.0, std::abs(mid))) break;
  }
  return 0.5 * (lo + hi);
}

Estimate wp_quantile_1d(const GaussianMixture1D& p, const GaussianMixture1D& q, int order, const QuadratureSpec& spec) {
  if (order != 1 && order != 2) throw InvalidArgument("wp_quantile_1d: order must be 1 or 2");
  if (p == q) return {0.0, 0.0, true};
  if (p.all_atoms() && q.all_atoms()) {
    const double power = atomic_wp_power(p, q, order);
    return {std::pow(power, 1.0 / order), 0.0, true};
  }
  auto integrand = [&](double z) {
    const double d = std::abs(mixture_quantile_probit(p, z) - mixture_quantile_probit(q, z));
    return std::pow(d, order) * kInvSqrt2Pi * std::exp(-0.5 * z * z);
  };
  const Estimate power = integrate(integrand, -spec.tail_sigma, spec.tail_sigma, spec);
  const double value = std::pow(std::max(power.value, 0.0), 1.0 / order);
  const double upper = std::pow(std::max(power.value, 0.0) + power.error, 1.0 / order);
  const double lower = std::pow(std::max(power.value - power.error, 0.0), 1.0 / order);
  return {value, std::max(upper - value, value - lower), power.certified};
}

double gaussian_w2(double mean1, double var1, double mean2, double var2) {
  if (var1 < 0.0 || var2 < 0.0) throw InvalidArgument("gaussian_w2: variances must be non-negative");
  const double dm = mean1 - mean2;
  const double ds = std::sqrt(var1) - std::sqrt(var2);
  return std::sqrt(dm * dm + ds * ds);
}

double talagrand_w2_ub(double kl_nats, double sigma_max_sq) {
  if (kl_nats < 0.0 || !(sigma_max_sq > 0.0)) throw InvalidArgument("talagrand_w2_ub: need kl >= 0 and sigma_max_sq > 0");
  return std::sqrt(2.0 * sigma_max_sq * kl_nats);
}

double marton_dbar_ub(double kl_nats, std::size_t n) {
  if (kl_nats < 0.0 || n == 0) throw InvalidArgument("marton_dbar_ub: need kl >= 0 and n >= 1");
  return std::sqrt(kl_nats / (2.0 * static_cast<double>(n)));
}

double dbar_tensorize_ub(std::span<const Pmf> p, std::span<const Pmf> q) {
  if (p.size() != q.size() || p.empty()) throw InvalidArgument("dbar_tensorize_ub: list lengths differ");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += tv(p[i], q[i]);
  return s / static_cast<double>(p.size());
}

double dbar_contraction_ub(double dbar_x, std::span<const Channel> kernels) {
  if (!(dbar_x >= 0.0 && dbar_x <= 1.0)) throw InvalidArgument("dbar_contraction_ub: dbar_x must lie in [0,1]");
  double eta = 0.0;
  for (const auto& k : kernels) eta = std::max(eta, eta_tv(k));
  return eta * dbar_x;
}

}  // namespace wcont
