#include "wcont/gic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wcont {

std::string to_string(PowerConstraint c) { return c == PowerConstraint::average ? "average" : "almost_sure"; }

PowerConstraint parse_power_constraint(const std::string& text) {
  if (text == "as" || text == "almost_sure") return PowerConstraint::almost_sure;
  if (text == "avg" || text == "average") return PowerConstraint::average;
  throw InvalidArgument("constraint must be 'as' or 'avg', got '" + text + "'");
}

std::string to_string(OuterBranch b) { return b == OuterBranch::corner ? "corner" : "sato_kramer"; }

namespace {

double half_log1p(double x) { return 0.5 * std::log1p(x); }

void require_powers(double p1, double p2) {
  if (!(p1 > 0.0) || !(p2 > 0.0) || !std::isfinite(p1) || !std::isfinite(p2)) {
    throw InvalidArgument("powers p1, p2 must be positive and finite");
  }
}

void require_gains(double a, double b) {
  if (!(a >= 0.0) || !(b >= 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw InvalidArgument("gains a, b must be non-negative and finite");
  }
}

void require_theorem_gain(double a) {
  if (!(a > 0.0 && a <= 1.0)) throw InvalidArgument("a must lie in (0,1]");
}

/// Places r2 inside [lo, hi], absorbing overshoot at the rounding level only.
double checked_rate(double r2, double lo, double hi) {
  const double slack = 8.0 * std::numeric_limits<double>::epsilon() * (1.0 + hi);
  if (!(r2 >= lo - slack && r2 <= hi + slack)) {
    throw InvalidArgument("r2 must lie in [C2~, C2] = [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return std::clamp(r2, lo, hi);
}

}  // namespace

double gic_c1(const GicParams& p) {
  require_powers(p.p1, p.p2);
  return half_log1p(p.p1);
}

double gic_c2(const GicParams& p) {
  require_powers(p.p1, p.p2);
  return half_log1p(p.p2);
}

double gic_c2_tilde(const GicParams& p) {
  require_powers(p.p1, p.p2);
  require_gains(p.a, p.b);
  return half_log1p(p.p2 / (1.0 + p.a * p.a * p.p1));
}

double outer_delta(const GicParams& p, double r2) {
  require_theorem_gain(p.a);
  const double c2 = gic_c2(p);
  const double gap = c2 - checked_rate(r2, gic_c2_tilde(p), c2);
  if (p.constraint == PowerConstraint::almost_sure) {
    return gap + p.a * std::sqrt(2.0 * p.p1 * gap / (1.0 + p.p2));
  }
  const double coefficient = 3.0 * std::sqrt(1.0 + p.a * p.a * p.p1 + p.p2) + 4.0 * p.a * std::sqrt(p.p1);
  return gap + std::sqrt(2.0 * gap / (1.0 + p.p2)) * coefficient;
}

OuterBoundDetail outer_bound_detail(const GicParams& p, double r2) {
  require_theorem_gain(p.a);
  require_gains(p.a, p.b);
  const double c2 = gic_c2(p);
  r2 = checked_rate(r2, gic_c2_tilde(p), c2);

  OuterBoundDetail d;
  const double a2 = p.a * p.a;
  d.a_factor = (p.p1 + (1.0 + p.p2) / a2) * std::exp(-2.0 * r2);
  d.delta = outer_delta(p, r2);
  d.first_term = d.a_factor - 1.0 / a2 + 1.0;
  d.second_term = d.a_factor * ((1.0 + p.p2) * (1.0 - (1.0 - a2) * std::exp(-2.0 * d.delta)) - a2) / p.p2;
  d.active = d.second_term <= d.first_term ? OuterBranch::corner : OuterBranch::sato_kramer;
  d.r1 = 0.5 * std::log(std::min(d.first_term, d.second_term));
  return d;
}

double outer_bound_r1(const GicParams& p, double r2) { return outer_bound_detail(p, r2).r1; }

RegionCurve outer_curve(const GicParams& p, std::size_t grid) {
  if (grid < 2) throw InvalidArgument("grid must be at least 2");
  require_theorem_gain(p.a);
  const double lo = gic_c2_tilde(p);
  const double hi = gic_c2(p);
  RegionCurve curve{CurveKind::outer, {}};
  curve.points.reserve(grid);
  for (std::size_t k = 0; k < grid; ++k) {
    const double r2 = k + 1 == grid ? hi : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(grid - 1);
    curve.points.push_back({outer_bound_r1(p, r2), r2});
  }
  return curve;
}

RatePoint hk_inner_point(const GicParams& p, double s) {
  require_powers(p.p1, p.p2);
  require_gains(p.a, p.b);
  if (!(s >= 0.0 && s <= p.p1)) throw InvalidArgument("s must lie in [0, P1]");
  const double a2 = p.a * p.a;
  const double private_noise = 1.0 + a2 * (p.p1 - s);
  const double r1 = half_log1p(p.p1 - s) + half_log1p(a2 * s / (private_noise + p.p2));
  const double r2 = half_log1p(p.p2 / private_noise);
  return {r1, r2};
}

RegionCurve hk_inner_curve(const GicParams& p, std::size_t grid) {
  if (grid < 2) throw InvalidArgument("grid must be at least 2");
  RegionCurve curve{CurveKind::inner, {}};
  curve.points.reserve(grid);
  for (std::size_t k = 0; k < grid; ++k) {
    const double s = k + 1 == grid ? p.p1 : p.p1 * static_cast<double>(k) / static_cast<double>(grid - 1);
    curve.points.push_back(hk_inner_point(p, s));
  }
  return curve;
}

bool MacRegion::contains(const RatePoint& pt) const {
  auto within = [](double v, double limit) {
    return v <= limit + 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(limit));
  };
  return pt.r1 >= 0.0 && pt.r2 >= 0.0 && within(pt.r1, r1_max) && within(pt.r2, r2_max) &&
         within(pt.r1 + pt.r2, sum_max);
}

MacRegion mac_intersection(const GicParams& p) {
  require_powers(p.p1, p.p2);
  require_gains(p.a, p.b);
  const double a2 = p.a * p.a;
  const double b2 = p.b * p.b;
  return {half_log1p(p.p1 * std::min(1.0, a2)), half_log1p(p.p2 * std::min(1.0, b2)),
          half_log1p(std::min(p.p1 + b2 * p.p2, p.p2 + a2 * p.p1))};
}

CornerValue corner_c1_prime(double a, double b, double p1, double p2) {
  require_powers(p1, p2);
  require_gains(a, b);
  if (a > 1.0) throw InvalidArgument("a must lie in [0,1]");
  if (a > 0.0) return {half_log1p(a * a * p1 / (1.0 + p2)), "0<a<=1"};
  const double threshold = std::sqrt(1.0 + p1);
  if (b == 0.0 || b >= threshold) return {half_log1p(p1), "a=0, b=0 or b>=sqrt(1+P1)"};
  if (b > 1.0) return {half_log1p((p1 + (b * b - 1.0) * p2) / (1.0 + p2)), "a=0, 1<b<sqrt(1+P1)"};
  return {half_log1p(p1 / (1.0 + b * b * p2)), "a=0, 0<b<=1"};
}

CornerValue corner_c2_prime(double a, double b, double p1, double p2) {
  require_powers(p1, p2);
  require_gains(a, b);
  if (a > 1.0) throw InvalidArgument("a must lie in [0,1]");
  const double threshold = std::sqrt((1.0 + p1) / (1.0 + a * a * p1));
  if (b == 0.0 || b >= threshold) {
    return {half_log1p(p2 / (1.0 + a * a * p1)), "b=0 or b>=sqrt((1+P1)/(1+a^2 P1))"};
  }
  if (b > 1.0) return {half_log1p(b * b * p2 / (1.0 + p1)), "1<b<sqrt((1+P1)/(1+a^2 P1))"};
  return {half_log1p(b * b * p2 / (1.0 + p1)), "0<b<=1"};
}

double sum_rate_bound(const GicParams& p) {
  require_powers(p.p1, p.p2);
  if (!(p.b >= 1.0)) throw InvalidArgument("sum_rate_bound requires b >= 1");
  return half_log1p(p.b * p.b * p.p2 + p.p1);
}

CornerReport corners(const GicParams& p) {
  CornerReport r;
  r.c1 = gic_c1(p);
  r.c2 = gic_c2(p);
  r.c2_tilde = gic_c2_tilde(p);
  const CornerValue top = corner_c1_prime(p.a, p.b, p.p1, p.p2);
  const CornerValue bottom = corner_c2_prime(p.a, p.b, p.p1, p.p2);
  r.c1_prime = top.value;
  r.c1_prime_case = top.case_label;
  r.c2_prime = bottom.value;
  r.c2_prime_case = bottom.case_label;
  return r;
}

}  // namespace wcont
