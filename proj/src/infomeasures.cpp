#include "wcont/infomeasures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace wcont {

double shannon_entropy(std::span<const double> p) {
  double h = 0.0;
  for (double v : p)
    if (v > 0.0) h -= v * std::log(v);
  return h;
}

double shannon_entropy(const Pmf& p) { return shannon_entropy(p.probs()); }

double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw InvalidArgument("binary_entropy: x must lie in [0,1]");
  const double y = 1.0 - x;
  return (x > 0.0 ? -x * std::log(x) : 0.0) + (y > 0.0 ? -y * std::log(y) : 0.0);
}

double kl_discrete(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw InvalidArgument("kl_discrete: dimension mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (q[i] <= 0.0) return kInfinity;
    d += p[i] * std::log(p[i] / q[i]);
  }
  return std::max(d, 0.0);
}

double kl_discrete(const Pmf& p, const Pmf& q) { return kl_discrete(p.probs(), q.probs()); }

double mutual_info_discrete(const Pmf& input, const Channel& channel) {
  if (input.block_length() != 1 || input.size() != channel.input_size()) {
    throw InvalidArgument("mutual_info_discrete: input pmf size must equal channel input size");
  }
  double conditional = 0.0;
  for (std::size_t x = 0; x < input.size(); ++x) conditional += input[x] * shannon_entropy(channel.row(x));
  return std::max(0.0, shannon_entropy(channel.push(input)) - conditional);
}

namespace {

void require_densities(const GaussianMixture1D& p, const char* who) {
  if (p.has_atoms()) throw InvalidArgument(std::string(who) + ": all component variances must be positive");
}

/// Integrates over a range that starts at tail_sigma standard deviations and
/// doubles its half-width while either tail strip still carries more than
/// abs_tol. The last tail estimate is added to the reported error.
Estimate integrate_with_tail_check(const std::function<double(double)>& f, double lo, double hi,
                                   const QuadratureSpec& spec) {
  QuadratureSpec coarse = spec;
  coarse.initial_panels = 8;
  coarse.max_depth = 20;
  for (int round = 0; round < 4; ++round) {
    const double w = 0.5 * (hi - lo);
    const Estimate left = integrate(f, lo - w, lo, coarse);
    const Estimate right = integrate(f, hi, hi + w, coarse);
    const double tail = std::abs(left.value) + std::abs(right.value);
    if (tail <= spec.abs_tol || round == 3) {
      Estimate body = integrate(f, lo, hi, spec);
      body.error += tail;
      if (tail > spec.abs_tol) body.certified = false;
      return body;
    }
    lo -= w;
    hi += w;
  }
  return {};  // unreachable
}

}  // namespace

Estimate diff_entropy_1d(const GaussianMixture1D& p, const QuadratureSpec& spec) {
  require_densities(p, "diff_entropy_1d");
  spec.validate();
  const double span = spec.tail_sigma * p.max_std();
  auto integrand = [&](double x) {
    const double lf = p.log_density(x);
    const double f = std::exp(lf);
    return f > 0.0 ? -f * lf : 0.0;
  };
  return integrate_with_tail_check(integrand, p.min_mean() - span, p.max_mean() + span, spec);
}

double gaussian_entropy(double variance, std::size_t n) {
  if (!(variance > 0.0)) throw InvalidArgument("gaussian_entropy: variance must be positive");
  return 0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi * std::numbers::e * variance);
}

Estimate kl_1d(const GaussianMixture1D& p, const GaussianMixture1D& q, const QuadratureSpec& spec) {
  require_densities(p, "kl_1d");
  require_densities(q, "kl_1d");
  spec.validate();
  if (p == q) return {0.0, 0.0, true};
  const double sd = std::max(p.max_std(), q.max_std());
  const double lo = std::min(p.min_mean(), q.min_mean()) - spec.tail_sigma * sd;
  const double hi = std::max(p.max_mean(), q.max_mean()) + spec.tail_sigma * sd;
  auto integrand = [&](double x) {
    const double lf = p.log_density(x);
    const double f = std::exp(lf);
    return f > 0.0 ? f * (lf - q.log_density(x)) : 0.0;
  };
  return integrate_with_tail_check(integrand, lo, hi, spec);
}

GaussianMixture1D convolve_with_gaussian(const GaussianMixture1D& p, double sigma_sq) {
  return p.convolve_gaussian(sigma_sq);
}

ScalarMax capacity_1d_concave(const std::function<double(double)>& objective, double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("capacity_1d_concave: tol must be positive");

  constexpr int kProbe = 64;
  std::vector<double> probe(kProbe + 1);
  for (int k = 0; k <= kProbe; ++k) probe[k] = objective(static_cast<double>(k) / kProbe);
  bool concave = true;
  for (int k = 1; k < kProbe; ++k) {
    const double chord = 0.5 * (probe[k - 1] + probe[k + 1]);
    if (probe[k] < chord - 1e-12 * (1.0 + std::abs(chord))) concave = false;
  }

  if (!concave) {
    constexpr int kGrid = 100000;
    ScalarMax best{0.0, objective(0.0), true};
    for (int k = 1; k <= kGrid; ++k) {
      const double q = static_cast<double>(k) / kGrid;
      const double v = objective(q);
      if (v > best.value) best = {q, v, true};
    }
    return best;
  }

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 0.0;
  double b = 1.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = objective(c);
  double fd = objective(d);
  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = objective(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = objective(d);
    }
  }
  const double mid = 0.5 * (a + b);
  return {mid, objective(mid), false};
}

}  // namespace wcont
