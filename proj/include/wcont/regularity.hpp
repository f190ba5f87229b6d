#ifndef WCONT_REGULARITY_HPP
#define WCONT_REGULARITY_HPP

#include "wcont/core.hpp"

namespace wcont {

/// Constants of a (c1, c2)-regular density: |grad log p(x)| <= c1 |x| + c2.
struct RegularityParams {
  double c1 = 1.0;
  double c2 = 0.0;

  /// Throws InvalidArgument unless c1 > 0 and c2 >= 0.
  void validate() const;
};

/// Moment inputs shared by the bound evaluators. Negative entries mark an
/// unknown quantity.
struct MomentData {
  double m2_u = 0.0;
  double m2_v = 0.0;
  double mean_dot = 0.0;
  double norm1_b = 0.0;
  double sup_norm_b = 0.0;

  /// Rejects negative moments and norm1_b^2 > m2 style inconsistencies.
  void validate() const;
};

// Every evaluator below returns nats and is a pure formula: moments and
// distances are supplied by the caller.

/// (c1/2 sqrt(m2_u) + c1/2 sqrt(m2_v) + c2) * w2.
double delta_ppr(const RegularityParams& reg, double m2_u, double m2_v, double w2);

/// Constants of B + N(0, sigma^2): (3/sigma^2, 4 E|B| / sigma^2).
RegularityParams gaussian_smoothing_regularity(double sigma_sq, double norm1_b);

/// Constants after adding an independent term bounded by sup_norm_b.
RegularityParams shift_regularity(const RegularityParams& reg, double sup_norm_b);

/// (1/sigma^2)(3 sqrt(n(sigma^2 + P)) + 4 sqrt(nP)) * w2.
double w2lip_delta(double sigma_sq, double power, std::size_t n, double w2);

/// (m2_u - m2_v + 2 sup_norm_b w1) / (2 sigma_g^2), sign preserved.
double best_bound(double sigma_g_sq, double sup_norm_b, double m2_u, double m2_v, double w1);

/// Moment term over 2(sigma_g^2 + sigma_z^2) plus the divergence term
/// sqrt(2 sup^2 (sigma_g^2 + c^2 sigma_z^2)) / (sigma_g^2 + sigma_z^2) * sqrt(kl).
double cor_best_bound(double sigma_g_sq, double sigma_z_sq, double c, double sup_norm_b, double m2_a,
                      double mean_dot, double m2_g, double kl_smoothed);

/// D(U||V) + D(V||U) <= 2 delta_ppr.
double symmetric_kl_bound(const RegularityParams& reg, double m2_u, double m2_v, double w2);

/// Worst ratio of the numerically evaluated score against the claimed
/// envelope on an evenly spaced grid.
struct GradientCertificate {
  /// max over the grid of |score(x)| - (c1 |x| + c2); <= 0 means the claim held.
  double max_excess = 0.0;
  double worst_x = 0.0;
  std::size_t grid_points = 0;
};

/// Checks |(log p)'(x)| <= c1|x| + c2 on `points` evenly spaced points over
/// [-half_width, half_width]. The score is the closed-form mixture score,
/// cross-checked against a central difference of log p; a disagreement above
/// 1e-4 relative is reported as a NumericFailure.
GradientCertificate certify_regularity(const GaussianMixture1D& density, const RegularityParams& reg,
                                       double half_width, std::size_t points = 2001);

/// Default grid half-width 10 (sigma + max |b|) for a smoothed atom mixture.
double regularity_grid_half_width(double sigma_sq, const GaussianMixture1D& atoms);

}  // namespace wcont

#endif  // WCONT_REGULARITY_HPP
