#ifndef WCONT_TRANSPORT_HPP
#define WCONT_TRANSPORT_HPP

#include <span>
#include <vector>

#include "wcont/core.hpp"
#include "wcont/quadrature.hpp"

namespace wcont {

/// Non-negative transport cost, |support mu| x |support nu|.
using CostMatrix = Matrix;

/// Normalized Hamming cost d_H(x, y) / n over X^n x X^n.
CostMatrix hamming_cost(std::size_t alphabet_size, std::size_t n);

/// Exact optimal transport by the transportation simplex (MODI pricing,
/// Bland's rule for both entering and leaving cells). The returned plan
/// carries the final dual potentials as an optimality certificate.
CouplingPlan ot_exact(std::span<const double> mu, std::span<const double> nu, const CostMatrix& cost);
CouplingPlan ot_exact(const Pmf& mu, const Pmf& nu, const CostMatrix& cost);

/// Largest violation of phi_i + psi_j <= cost_ij and |dual - primal|, for
/// independent checking of a plan.
struct DualityGap {
  double max_dual_violation = 0.0;
  double objective_gap = 0.0;
  double max_marginal_error = 0.0;
};
DualityGap certify(const CouplingPlan& plan, std::span<const double> mu, std::span<const double> nu,
                   const CostMatrix& cost);

/// Ornstein's d-bar distance; requires |X|^(2n) <= 1e6.
double dbar(const Pmf& p, const Pmf& q);

double tv(const Pmf& p, const Pmf& q);
double tv(std::span<const double> p, std::span<const double> q);

/// W_p between 1-D mixtures, p in {1, 2}, through the quantile representation
/// integrated in the Gaussian-probit variable u = Phi(z), |z| <= tail_sigma.
/// Purely atomic pairs are handled exactly.
Estimate wp_quantile_1d(const GaussianMixture1D& p, const GaussianMixture1D& q, int order,
                        const QuadratureSpec& spec = {.abs_tol = 1e-12});

/// Quantile of a mixture at probability Phi(z), evaluated on the lower tail
/// for z <= 0 and the upper tail for z > 0 so both ends keep full precision.
double mixture_quantile_probit(const GaussianMixture1D& m, double z);

double gaussian_w2(double mean1, double var1, double mean2, double var2);

/// sqrt(2 sigma_max^2 D) with D in nats.
double talagrand_w2_ub(double kl_nats, double sigma_max_sq);
/// sqrt(D / (2 n)) with D in nats.
double marton_dbar_ub(double kl_nats, std::size_t n);
/// (1/n) sum_i TV(P_i, Q_i).
double dbar_tensorize_ub(std::span<const Pmf> p, std::span<const Pmf> q);
/// max_i eta_TV(kernel_i) * dbar_x.
double dbar_contraction_ub(double dbar_x, std::span<const Channel> kernels);

}  // namespace wcont

#endif  // WCONT_TRANSPORT_HPP
