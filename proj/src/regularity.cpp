#include "wcont/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace wcont {

void RegularityParams::validate() const {
  if (!(c1 > 0.0) || !(c2 >= 0.0) || !std::isfinite(c1) || !std::isfinite(c2)) {
    throw InvalidArgument("regularity: need c1 > 0 and c2 >= 0");
  }
}

void MomentData::validate() const {
  if (m2_u < 0.0 || m2_v < 0.0 || norm1_b < 0.0 || sup_norm_b < 0.0) {
    throw InvalidArgument("moments: second moments and norms must be non-negative");
  }
  if (norm1_b > sup_norm_b && sup_norm_b > 0.0) {
    throw InvalidArgument("moments: E|B| cannot exceed the almost-sure bound on |B|");
  }
}

namespace {

void require_nonneg(double v, const char* what) {
  if (!(v >= 0.0)) throw InvalidArgument(std::string(what) + " must be non-negative");
}

void require_pos(double v, const char* what) {
  if (!(v > 0.0)) throw InvalidArgument(std::string(what) + " must be positive");
}

}  // namespace

double delta_ppr(const RegularityParams& reg, double m2_u, double m2_v, double w2) {
  reg.validate();
  require_nonneg(m2_u, "m2_u");
  require_nonneg(m2_v, "m2_v");
  require_nonneg(w2, "w2");
  return (0.5 * reg.c1 * std::sqrt(m2_u) + 0.5 * reg.c1 * std::sqrt(m2_v) + reg.c2) * w2;
}

RegularityParams gaussian_smoothing_regularity(double sigma_sq, double norm1_b) {
  require_pos(sigma_sq, "sigma_sq");
  require_nonneg(norm1_b, "norm1_b");
  return {3.0 / sigma_sq, 4.0 * norm1_b / sigma_sq};
}

RegularityParams shift_regularity(const RegularityParams& reg, double sup_norm_b) {
  reg.validate();
  require_nonneg(sup_norm_b, "sup_norm_b");
  return {reg.c1, reg.c2 + reg.c1 * sup_norm_b};
}

double w2lip_delta(double sigma_sq, double power, std::size_t n, double w2) {
  require_pos(sigma_sq, "sigma_sq");
  require_nonneg(power, "power");
  require_nonneg(w2, "w2");
  if (n == 0) throw InvalidArgument("n must be positive");
  const double nn = static_cast<double>(n);
  return (3.0 * std::sqrt(nn * (sigma_sq + power)) + 4.0 * std::sqrt(nn * power)) / sigma_sq * w2;
}

double best_bound(double sigma_g_sq, double sup_norm_b, double m2_u, double m2_v, double w1) {
  require_pos(sigma_g_sq, "sigma_g_sq");
  require_nonneg(sup_norm_b, "sup_norm_b");
  require_nonneg(m2_u, "m2_u");
  require_nonneg(m2_v, "m2_v");
  require_nonneg(w1, "w1");
  return (m2_u - m2_v + 2.0 * sup_norm_b * w1) / (2.0 * sigma_g_sq);
}

double cor_best_bound(double sigma_g_sq, double sigma_z_sq, double c, double sup_norm_b, double m2_a,
                      double mean_dot, double m2_g, double kl_smoothed) {
  if (!(c >= 0.0 && c <= 1.0)) throw InvalidArgument("c must lie in [0,1]");
  require_pos(sigma_g_sq, "sigma_g_sq");
  require_pos(sigma_z_sq, "sigma_z_sq");
  require_nonneg(sup_norm_b, "sup_norm_b");
  require_nonneg(m2_a, "m2_a");
  require_nonneg(m2_g, "m2_g");
  require_nonneg(kl_smoothed, "kl");
  const double total = sigma_g_sq + sigma_z_sq;
  const double moment = (m2_a + 2.0 * mean_dot - m2_g) / (2.0 * total);
  const double spread = std::sqrt(2.0 * sup_norm_b * sup_norm_b * (sigma_g_sq + c * c * sigma_z_sq)) / total;
  return moment + spread * std::sqrt(kl_smoothed);
}

double symmetric_kl_bound(const RegularityParams& reg, double m2_u, double m2_v, double w2) {
  return 2.0 * delta_ppr(reg, m2_u, m2_v, w2);
}

GradientCertificate certify_regularity(const GaussianMixture1D& density, const RegularityParams& reg,
                                       double half_width, std::size_t points) {
  reg.validate();
  require_pos(half_width, "half_width");
  if (points < 2) throw InvalidArgument("certify_regularity: need at least 2 grid points");
  if (density.has_atoms()) throw InvalidArgument("certify_regularity: density must have positive variances");

  GradientCertificate cert;
  cert.grid_points = points;
  cert.max_excess = -std::numeric_limits<double>::infinity();
  const double step = 2.0 * half_width / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) {
    const double x = -half_width + step * static_cast<double>(i);
    const double score = density.score(x);
    const double h = 1e-5 * (1.0 + std::abs(x));
    const double fd = (density.log_density(x + h) - density.log_density(x - h)) / (2.0 * h);
    if (std::abs(fd - score) > 1e-4 * (1.0 + std::abs(score))) {
      throw NumericFailure("certify_regularity: score and finite difference disagree at x = " + std::to_string(x));
    }
    const double excess = std::abs(score) - (reg.c1 * std::abs(x) + reg.c2);
    if (excess > cert.max_excess) {
      cert.max_excess = excess;
      cert.worst_x = x;
    }
  }
  return cert;
}

double regularity_grid_half_width(double sigma_sq, const GaussianMixture1D& atoms) {
  require_pos(sigma_sq, "sigma_sq");
  return 10.0 * (std::sqrt(sigma_sq) + atoms.max_abs_mean());
}

}  // namespace wcont
