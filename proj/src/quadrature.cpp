#include "wcont/quadrature.hpp"

#include <cmath>
#include <limits>

#include "wcont/core.hpp"

namespace wcont {

void QuadratureSpec::validate() const {
  if (!(abs_tol > 0.0)) throw InvalidArgument("quadrature: abs_tol must be positive");
  if (!(tail_sigma >= 10.0)) throw InvalidArgument("quadrature: tail_sigma must be at least 10");
  if (max_depth < 1 || initial_panels < 1) throw InvalidArgument("quadrature: depth and panel counts must be positive");
}

namespace {

struct Accumulator {
  double error = 0.0;
  bool certified = true;
};

double simpson_recurse(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                       double whole, double tol, int depth, Accumulator& acc) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  const double roundoff = 64.0 * std::numeric_limits<double>::epsilon() * (std::abs(left) + std::abs(right));
  if (std::abs(delta) <= 15.0 * tol || std::abs(delta) <= roundoff || depth <= 0 || !std::isfinite(delta)) {
    if (depth <= 0 && std::abs(delta) > 15.0 * tol) acc.certified = false;
    if (!std::isfinite(delta)) acc.certified = false;
    acc.error += std::abs(delta) / 15.0;
    return left + right + delta / 15.0;
  }
  return simpson_recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, acc) +
         simpson_recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, acc);
}

}  // namespace

Estimate integrate(const std::function<double(double)>& f, double lo, double hi, const QuadratureSpec& spec) {
  spec.validate();
  if (!(hi > lo)) return {0.0, 0.0, true};
  const std::size_t panels = spec.initial_panels;
  const double h = (hi - lo) / static_cast<double>(panels);

  std::vector<double> xs(2 * panels + 1);
  std::vector<double> fs(2 * panels + 1);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    xs[i] = lo + 0.5 * h * static_cast<double>(i);
    fs[i] = f(xs[i]);
  }
  xs.back() = hi;
  double rough = 0.0;
  std::vector<double> whole(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    whole[p] = (xs[2 * p + 2] - xs[2 * p]) / 6.0 * (fs[2 * p] + 4.0 * fs[2 * p + 1] + fs[2 * p + 2]);
    rough += whole[p];
  }
  const double tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(rough));

  Accumulator acc;
  double total = 0.0;
  for (std::size_t p = 0; p < panels; ++p) {
    total += simpson_recurse(f, xs[2 * p], xs[2 * p + 2], fs[2 * p], fs[2 * p + 1], fs[2 * p + 2], whole[p],
                             tol / static_cast<double>(panels), spec.max_depth, acc);
  }
  if (!std::isfinite(total)) acc.certified = false;
  return {total, acc.error, acc.certified};
}

}  // namespace wcont
