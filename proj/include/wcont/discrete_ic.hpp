#ifndef WCONT_DISCRETE_IC_HPP
#define WCONT_DISCRETE_IC_HPP

#include <string>
#include <vector>

#include "wcont/core.hpp"

namespace wcont {

// All information quantities in nats.

/// x ln(k-1) + h_b(x), with 0 ln(1/0) = 0.
double fano_fx(double x, std::size_t alphabet_size);

/// n F_X(dbar(P, Q)) for pmfs on X^n.
double entropy_gap_fano_ub(const Pmf& p, const Pmf& q);

/// max over (x, a) and output pairs of ln W(y|x,a)/W(y'|x,a). Infinite when a
/// row mixes zero and non-zero entries.
double channel_log_ratio_c(const TwoInputChannel& w);

struct DbarBounds {
  double h_bound = 0.0;  // |H(Y) - H(Y~)|
  double d_bound = 0.0;  // D(P_Y || P_Y~) + D(P_Y~ || P_Y)
  double i_bound = 0.0;  // |I(X;Y) - I(X;Y~)|
};

/// (c n dbar_y, 2 c n dbar_y, 2 c n mean_conditional_dbar), n taken from the
/// block length of p_y. Rejects infinite c.
DbarBounds prop_dbar_bounds(const TwoInputChannel& w, const Pmf& p_y, const Pmf& p_ytilde, double dbar_y,
                            double mean_conditional_dbar);

/// Dobrushin coefficient: max pairwise total variation between rows.
double eta_tv(const Channel& kernel);

/// max over x of eta_tv of the channel a -> y with x fixed.
double eta_tv_two_input(const TwoInputChannel& w);

struct EtaKlEstimate {
  /// Best ratio found. Always a lower estimate of the supremum.
  double value = 0.0;
  std::size_t x = 0;
  std::vector<double> q0;
  bool grid_lower_bound = true;
};

/// sup over x and Q0 != p0 of D(Q0 W_x || p0 W_x) / D(Q0 || p0), searched on a
/// simplex grid of the given resolution then refined by pattern search. Points
/// with D(Q0 || p0) < 1e-6 are excluded.
EtaKlEstimate eta_kl_two_input(const TwoInputChannel& w, const Pmf& p0, std::size_t grid_resolution = 100);

/// sqrt(2 n kl) ln |X|.
double chang_one_sided_ub(double kl_nats, std::size_t n, std::size_t alphabet_size);

struct FcKnot {
  double t = 0.0;
  double fc = 0.0;
};

/// Concave nondecreasing envelope of the (H(X|B), H(X|A)) pairs of the chain
/// X -> A -> B, with flags for the two strictness conditions.
struct FcCurve {
  std::vector<FcKnot> knots;
  double t_max = 0.0;
  /// Bound on how far the grid envelope can sit below the exact one.
  double grid_err = 0.0;
  /// Every pair of distinct rows of P_B|A overlaps by more than 1e-9.
  bool strict1 = false;
  /// Every pair of distinct rows of P_A|X differs by more than 1e-9 in TV.
  bool strict2 = false;
  double strict1_margin = 0.0;
  double strict2_margin = 0.0;

  /// Piecewise-linear evaluation; constant beyond t_max.
  double operator()(double t) const;
};

/// Sweeps P_X over the simplex grid {k / grid} and takes the upper concave,
/// nondecreasing hull of the resulting points together with (0, 0).
FcCurve fc_envelope(const Channel& a_given_x, const Channel& b_given_a, std::size_t grid);

struct GKnot {
  double eps = 0.0;
  double g = 0.0;
};

/// Inverse of t -> t - F_c(t).
struct GCurve {
  std::vector<GKnot> knots;
  /// F_c(t_max), used for the linear continuation past the last knot.
  double fc_at_t_max = 0.0;

  double operator()(double eps) const;
};

/// Throws InvalidArgument naming the failed strictness condition when either
/// applicability flag is unset.
GCurve g_from_fc(const FcCurve& curve);

/// Cyclic convolution on Z_m of two pmfs of the same size.
std::vector<double> cyclic_convolve(std::span<const double> a, std::span<const double> b);

struct DiscreteCornerReport {
  double c2 = 0.0;
  double c1_prime = 0.0;
  double q_star = 0.0;
  Pmf p3 = Pmf::uniform(3);
  /// False for uniform P2, where the special values C2 = 0, C1' = ln 2 are
  /// reported instead of the maximization result.
  bool theorem_applies = true;
  bool fallback_grid = false;
  std::string note;
};

/// Maximizes q -> H([1-q, q, 0] * P2) - H(P2) over [0, 1]. Requires P2 on
/// {0,1,2} with no zero entries.
DiscreteCornerReport discrete_corner(const Pmf& p2);

}  // namespace wcont

#endif  // WCONT_DISCRETE_IC_HPP
