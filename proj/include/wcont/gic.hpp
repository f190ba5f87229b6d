#ifndef WCONT_GIC_HPP
#define WCONT_GIC_HPP

#include <string>

#include "wcont/core.hpp"

namespace wcont {

enum class PowerConstraint { almost_sure, average };

std::string to_string(PowerConstraint c);
/// Accepts "as", "almost_sure", "avg", "average".
PowerConstraint parse_power_constraint(const std::string& text);

/// Y1 = X1 + b X2 + Z1, Y2 = a X1 + X2 + Z2 with unit noise.
struct GicParams {
  double a = 0.0;
  double b = 0.0;
  double p1 = 1.0;
  double p2 = 1.0;
  PowerConstraint constraint = PowerConstraint::almost_sure;
};

// Rates are in nats.

/// 1/2 ln(1 + P1).
double gic_c1(const GicParams& p);
/// 1/2 ln(1 + P2).
double gic_c2(const GicParams& p);
/// 1/2 ln(1 + P2 / (1 + a^2 P1)).
double gic_c2_tilde(const GicParams& p);

/// Which term of the two-way minimum is active. Ties go to `corner`.
enum class OuterBranch { sato_kramer, corner };
std::string to_string(OuterBranch b);

struct OuterBoundDetail {
  double r1 = 0.0;
  double a_factor = 0.0;  // A
  double delta = 0.0;     // delta or delta' per the constraint
  double first_term = 0.0;
  double second_term = 0.0;
  OuterBranch active = OuterBranch::corner;
};

/// delta for almost-sure power, delta' for average power, at rate r2.
double outer_delta(const GicParams& p, double r2);

/// Outer bound on R1 at R2 = r2. Requires 0 < a <= 1 and r2 in [C2~, C2];
/// both are hard errors otherwise.
OuterBoundDetail outer_bound_detail(const GicParams& p, double r2);
double outer_bound_r1(const GicParams& p, double r2);

/// r2 sampled uniformly over [C2~, C2] (endpoints included).
RegionCurve outer_curve(const GicParams& p, std::size_t grid);

/// Single-parameter Han-Kobayashi point for the split s in [0, P1].
RatePoint hk_inner_point(const GicParams& p, double s);
/// s sampled uniformly over [0, P1]; R2 increases along the curve.
RegionCurve hk_inner_curve(const GicParams& p, std::size_t grid);

/// Intersection of the two Gaussian MAC regions.
struct MacRegion {
  double r1_max = 0.0;
  double r2_max = 0.0;
  double sum_max = 0.0;

  /// Membership with a relative slack of a few ulps so that points computed
  /// on the boundary are accepted.
  bool contains(const RatePoint& pt) const;
};
MacRegion mac_intersection(const GicParams& p);

struct CornerValue {
  double value = 0.0;
  std::string case_label;
};

/// Top corner C1'(a, b). Requires 0 <= a <= 1.
CornerValue corner_c1_prime(double a, double b, double p1, double p2);
/// Bottom corner C2'(a, b). Requires 0 <= a <= 1.
CornerValue corner_c2_prime(double a, double b, double p1, double p2);

/// 1/2 ln(1 + b^2 P2 + P1); requires b >= 1.
double sum_rate_bound(const GicParams& p);

struct CornerReport {
  double c1 = 0.0;
  double c2 = 0.0;
  double c2_tilde = 0.0;
  double c1_prime = 0.0;
  double c2_prime = 0.0;
  std::string c1_prime_case;
  std::string c2_prime_case;
};
CornerReport corners(const GicParams& p);

}  // namespace wcont

#endif  // WCONT_GIC_HPP
