#ifndef WCONT_QUADRATURE_HPP
#define WCONT_QUADRATURE_HPP

#include <cstddef>
#include <functional>

namespace wcont {

/// A numerical value with its error estimate. `certified` is false when the
/// routine hit its budget before meeting the requested tolerance.
struct Estimate {
  double value = 0.0;
  double error = 0.0;
  bool certified = true;
};

struct QuadratureSpec {
  double abs_tol = 1e-9;
  double rel_tol = 0.0;
  int max_depth = 40;
  double tail_sigma = 12.0;
  /// Panels the range is split into before adaptive refinement starts.
  std::size_t initial_panels = 64;

  /// Throws InvalidArgument unless abs_tol > 0 and tail_sigma >= 10.
  void validate() const;
};

/// Adaptive Simpson with Richardson correction on [lo, hi]. The tolerance is
/// distributed proportionally to sub-interval length, so the summed local
/// error estimates stay below max(abs_tol, rel_tol * |I|).
Estimate integrate(const std::function<double(double)>& f, double lo, double hi, const QuadratureSpec& spec);

}  // namespace wcont

#endif  // WCONT_QUADRATURE_HPP
