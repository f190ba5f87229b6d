#ifndef WCONT_INFOMEASURES_HPP
#define WCONT_INFOMEASURES_HPP

#include <functional>
#include <limits>
#include <span>

#include "wcont/core.hpp"
#include "wcont/quadrature.hpp"

namespace wcont {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// All values in nats.

double shannon_entropy(std::span<const double> p);
double shannon_entropy(const Pmf& p);

/// Binary entropy h_b(x) in nats.
double binary_entropy(double x);

/// D(P || Q); returns kInfinity when supp(P) is not contained in supp(Q).
double kl_discrete(std::span<const double> p, std::span<const double> q);
double kl_discrete(const Pmf& p, const Pmf& q);

/// I(X;Y) = H(PW) - sum_x p(x) H(W(.|x)).
double mutual_info_discrete(const Pmf& input, const Channel& channel);

/// Differential entropy of a 1-D mixture with all variances > 0. The range is
/// [min mean - tail_sigma * max std, max mean + tail_sigma * max std] and is
/// doubled while the tail check still sees mass above abs_tol.
Estimate diff_entropy_1d(const GaussianMixture1D& p, const QuadratureSpec& spec = {});

/// h of an isotropic n-dimensional Gaussian, (n/2) ln(2 pi e sigma^2).
double gaussian_entropy(double variance, std::size_t n = 1);

Estimate kl_1d(const GaussianMixture1D& p, const GaussianMixture1D& q, const QuadratureSpec& spec = {});

GaussianMixture1D convolve_with_gaussian(const GaussianMixture1D& p, double sigma_sq);

struct ScalarMax {
  double argmax = 0.0;
  double value = 0.0;
  /// Set when the concavity probe failed and a dense grid search was used.
  bool fallback_grid = false;
};

/// Golden-section maximization of a concave objective on [0, 1]. Concavity is
/// probed by midpoint sampling before the search starts.
ScalarMax capacity_1d_concave(const std::function<double(double)>& objective, double tol = 1e-10);

}  // namespace wcont

#endif  // WCONT_INFOMEASURES_HPP
