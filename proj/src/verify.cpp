#include "wcont/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <thread>

#include "wcont/discrete_ic.hpp"
#include "wcont/gic.hpp"
#include "wcont/infomeasures.hpp"
#include "wcont/regularity.hpp"
#include "wcont/transport.hpp"

namespace wcont {

namespace {

struct FamilyName {
  Family family;
  const char* name;
};

constexpr FamilyName kFamilyNames[] = {
    {Family::ppr, "ppr"},
    {Family::w2lip, "w2lip"},
    {Family::best, "best"},
    {Family::cor_best, "cor_best"},
    {Family::jpt, "jpt"},
    {Family::dbar_props, "dbar_props"},
    {Family::marton_chain, "marton_chain"},
    {Family::fc, "fc"},
    {Family::gic_corner, "gic_corner"},
    {Family::discrete_corner, "discrete_corner"},
};

}  // namespace

std::string to_string(Family f) {
  for (const auto& entry : kFamilyNames)
    if (entry.family == f) return entry.name;
  return "unknown";
}

Family parse_family(const std::string& text) {
  for (const auto& entry : kFamilyNames)
    if (text == entry.name) return entry.family;
  throw InvalidArgument("unknown family '" + text + "'");
}

const std::vector<Family>& all_families() {
  static const std::vector<Family> families = [] {
    std::vector<Family> out;
    for (const auto& entry : kFamilyNames) out.push_back(entry.family);
    return out;
  }();
  return families;
}

double family_tolerance(Family f) {
  switch (f) {
    case Family::jpt:
    case Family::dbar_props:
    case Family::marton_chain:
    case Family::fc:
      return 1e-10;
    case Family::discrete_corner:
      return 1e-12;
    default:
      return 1e-9;
  }
}

namespace {

bool is_continuous(Family f) {
  return f == Family::ppr || f == Family::w2lip || f == Family::best || f == Family::cor_best;
}

// ---------------------------------------------------------------------------
// Instance generation
// ---------------------------------------------------------------------------

/// Draw source whose digest covers every uniform consumed, and hence every
/// instance parameter.
class Source {
 public:
  explicit Source(std::uint64_t seed) : rng_(seed) {}

  double uniform() {
    const double u = rng_.uniform();
    digest_.add(u);
    return u;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::size_t index(std::size_t n) {
    const auto k = static_cast<std::size_t>(uniform() * static_cast<double>(n));
    return k < n ? k : n - 1;
  }
  std::vector<double> dirichlet(std::size_t k) {
    std::vector<double> w(k);
    double total = 0.0;
    for (auto& v : w) {
      v = -std::log1p(-uniform());
      total += v;
    }
    if (!(total > 0.0)) return std::vector<double>(k, 1.0 / static_cast<double>(k));
    for (auto& v : w) v /= total;
    return w;
  }
  std::uint64_t digest() const { return digest_.value(); }

 private:
  Rng rng_;
  Fnv1a digest_;
};

constexpr double kAtomRadius = 2.0;
constexpr double kChannelFloor = 0.02;

/// 2 to 4 atoms uniform in [-radius, radius] with flat Dirichlet weights.
GaussianMixture1D random_atoms(Source& src, double radius = kAtomRadius) {
  const std::size_t count = 2 + src.index(3);
  std::vector<double> locations(count);
  for (auto& x : locations) x = src.uniform(-radius, radius);
  const std::vector<double> weights = src.dirichlet(count);
  return GaussianMixture1D::atoms(locations, weights);
}

double max_abs_atom(const GaussianMixture1D& m) { return m.max_abs_mean(); }

/// Dirichlet row pushed into [floor, 1]: floor + (1 - k floor) * w.
std::vector<double> floored_row(Source& src, std::size_t k) {
  std::vector<double> w = src.dirichlet(k);
  const double scale = 1.0 - kChannelFloor * static_cast<double>(k);
  for (auto& v : w) v = kChannelFloor + scale * v;
  return w;
}

Channel floored_channel(Source& src, std::size_t in, std::size_t out) {
  std::vector<std::vector<double>> rows;
  for (std::size_t x = 0; x < in; ++x) rows.push_back(floored_row(src, out));
  return Channel(std::move(rows));
}

TwoInputChannel floored_two_input(Source& src, std::size_t kx, std::size_t ka, std::size_t ky) {
  std::vector<std::vector<std::vector<double>>> w(kx);
  for (auto& per_x : w)
    for (std::size_t a = 0; a < ka; ++a) per_x.push_back(floored_row(src, ky));
  return TwoInputChannel(std::move(w));
}

Pmf random_pmf(Source& src, std::size_t k, std::size_t n) {
  return Pmf::from_weights(src.dirichlet(product_size(k, n)), k, n);
}

Pmf random_product(Source& src, std::size_t k, std::size_t n, std::vector<Pmf>* letters = nullptr) {
  std::vector<Pmf> parts;
  for (std::size_t i = 0; i < n; ++i) parts.push_back(Pmf::from_weights(src.dirichlet(k), k));
  Pmf out = Pmf::product(parts);
  if (letters) *letters = std::move(parts);
  return out;
}

// ---------------------------------------------------------------------------
// Exact discrete helpers
// ---------------------------------------------------------------------------

/// Law of (K_1(X_1), ..., K_n(X_n)) for independent per-letter kernels.
Pmf push_letters(const Pmf& input, std::span<const Channel> kernels) {
  const std::size_t n = input.block_length();
  const std::size_t k_in = input.alphabet_size();
  const std::size_t k_out = kernels.front().output_size();
  std::vector<double> cur(input.probs().begin(), input.probs().end());
  std::size_t pre = 1;
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t suf = 1;
    for (std::size_t i = j + 1; i < n; ++i) suf *= k_in;
    std::vector<double> next(pre * k_out * suf, 0.0);
    const Channel& kj = kernels[j];
    for (std::size_t p = 0; p < pre; ++p)
      for (std::size_t x = 0; x < k_in; ++x)
        for (std::size_t s = 0; s < suf; ++s) {
          const double v = cur[(p * k_in + x) * suf + s];
          if (v == 0.0) continue;
          for (std::size_t y = 0; y < k_out; ++y) next[(p * k_out + y) * suf + s] += v * kj(y, x);
        }
    cur = std::move(next);
    pre *= k_out;
  }
  return Pmf::from_weights(std::move(cur), k_out, n);
}

/// P_{Y|X=x} of the memoryless two-input channel driven by A ~ pa.
Pmf two_input_output(const TwoInputChannel& w, std::span<const Symbol> x, const Pmf& pa) {
  std::vector<Channel> kernels;
  kernels.reserve(x.size());
  for (Symbol letter : x) kernels.push_back(w.slice(letter));
  return push_letters(pa, kernels);
}

/// H(X^n | Y^n) for a memoryless channel applied letterwise.
double conditional_entropy_product(const Pmf& px, const Channel& ch) {
  const std::size_t n = px.block_length();
  std::vector<double> row_entropy(ch.input_size());
  for (std::size_t x = 0; x < ch.input_size(); ++x) row_entropy[x] = shannon_entropy(ch.row(x));
  double noise = 0.0;
  for (std::size_t i = 0; i < px.size(); ++i) {
    if (px[i] == 0.0) continue;
    const SymbolString letters = index_decode(i, px.alphabet_size(), n);
    double h = 0.0;
    for (Symbol s : letters) h += row_entropy[s];
    noise += px[i] * h;
  }
  return std::max(0.0, shannon_entropy(px) + noise - shannon_entropy(ch.push_product(px)));
}

struct OutputFamily {
  Pmf p_y;
  Pmf p_ytilde;
  std::vector<Pmf> y_given_x;
  std::vector<Pmf> ytilde_given_x;
};

/// Output laws of (X, A) and (X, A~) through the memoryless two-input channel.
OutputFamily outputs(const TwoInputChannel& w, const Pmf& px, const Pmf& pa, const Pmf& patilde) {
  const std::size_t n = px.block_length();
  std::vector<double> y(product_size(w.y_size(), n), 0.0);
  std::vector<double> yt(y.size(), 0.0);
  OutputFamily out{Pmf::uniform(w.y_size(), n), Pmf::uniform(w.y_size(), n), {}, {}};
  for (std::size_t i = 0; i < px.size(); ++i) {
    const SymbolString x = index_decode(i, px.alphabet_size(), n);
    out.y_given_x.push_back(two_input_output(w, x, pa));
    out.ytilde_given_x.push_back(two_input_output(w, x, patilde));
    for (std::size_t j = 0; j < y.size(); ++j) {
      y[j] += px[i] * out.y_given_x.back()[j];
      yt[j] += px[i] * out.ytilde_given_x.back()[j];
    }
  }
  out.p_y = Pmf::from_weights(std::move(y), w.y_size(), n);
  out.p_ytilde = Pmf::from_weights(std::move(yt), w.y_size(), n);
  return out;
}

double mean_conditional_dbar(const Pmf& px, const OutputFamily& o) {
  double m = 0.0;
  for (std::size_t i = 0; i < px.size(); ++i) {
    if (px[i] > 0.0) m += px[i] * dbar(o.y_given_x[i], o.ytilde_given_x[i]);
  }
  return m;
}

double mutual_information(const Pmf& px, const Pmf& py, const std::vector<Pmf>& y_given_x) {
  double cond = 0.0;
  for (std::size_t i = 0; i < px.size(); ++i) cond += px[i] * shannon_entropy(y_given_x[i]);
  return shannon_entropy(py) - cond;
}

// ---------------------------------------------------------------------------
// Families
// ---------------------------------------------------------------------------

using Outcomes = std::vector<CheckOutcome>;

CheckOutcome exact(std::string name, double lhs, double rhs) { return {std::move(name), lhs, rhs, 0.0, 0.0, true}; }

struct Continuous {
  double value;
  double error;
  bool certified;
};

Continuous entropy_of(const GaussianMixture1D& m) {
  const Estimate e = diff_entropy_1d(m);
  return {e.value, e.error, e.certified};
}

Continuous kl_of(const GaussianMixture1D& p, const GaussianMixture1D& q) {
  const Estimate e = kl_1d(p, q);
  return {std::max(e.value, 0.0), e.error, e.certified};
}

Continuous wp_of(const GaussianMixture1D& p, const GaussianMixture1D& q, int order) {
  const Estimate e = wp_quantile_1d(p, q, order);
  return {e.value, e.error, e.certified};
}

void family_ppr(Source& src, TrialResult& out) {
  const GaussianMixture1D bv = random_atoms(src);
  const GaussianMixture1D bu = random_atoms(src);
  const double sv = src.uniform(0.5, 2.0);
  const double su = src.uniform(0.5, 2.0);
  const GaussianMixture1D v = bv.convolve_gaussian(sv);
  const GaussianMixture1D u = bu.convolve_gaussian(su);

  const RegularityParams reg_v = gaussian_smoothing_regularity(sv, bv.first_abs_moment());
  const RegularityParams reg_u = gaussian_smoothing_regularity(su, bu.first_abs_moment());
  const GradientCertificate cert_v = certify_regularity(v, reg_v, regularity_grid_half_width(sv, bv));
  const GradientCertificate cert_u = certify_regularity(u, reg_u, regularity_grid_half_width(su, bu));
  out.outcomes.push_back(exact("gradient_certificate", cert_v.max_excess, 0.0));
  out.outcomes.push_back(exact("gradient_certificate", cert_u.max_excess, 0.0));

  const Continuous hu = entropy_of(u);
  const Continuous hv = entropy_of(v);
  const Continuous w2 = wp_of(u, v, 2);
  const double m2u = u.second_moment();
  const double m2v = v.second_moment();
  const bool cert = hu.certified && hv.certified && w2.certified;

  const double delta_v = delta_ppr(reg_v, m2u, m2v, w2.value);
  const double delta_v_err = delta_ppr(reg_v, m2u, m2v, w2.error);
  out.outcomes.push_back({"ppr2", hu.value - hv.value, delta_v, hu.error + hv.error + delta_v_err, 0.0, cert});

  const RegularityParams common{std::max(reg_u.c1, reg_v.c1), std::max(reg_u.c2, reg_v.c2)};
  const double delta = delta_ppr(common, m2u, m2v, w2.value);
  const double delta_err = delta_ppr(common, m2u, m2v, w2.error);
  out.outcomes.push_back({"ppr3", std::abs(hu.value - hv.value), delta, hu.error + hv.error + delta_err, 0.0, cert});

  const Continuous kuv = kl_of(u, v);
  const Continuous kvu = kl_of(v, u);
  out.outcomes.push_back({"ppr4", kuv.value + kvu.value, symmetric_kl_bound(common, m2u, m2v, w2.value),
                          kuv.error + kvu.error + 2.0 * delta_err, 0.0, cert && kuv.certified && kvu.certified});
}

/// Rescales atoms so that the second moment does not exceed `power`.
GaussianMixture1D capped(const GaussianMixture1D& atoms, double power) {
  const double m2 = atoms.second_moment();
  if (m2 <= power) return atoms;
  return atoms.scaled(std::sqrt(power / m2) * (1.0 - 1e-15));
}

void family_w2lip(Source& src, TrialResult& out) {
  const double power = src.uniform(0.5, 4.0);
  const GaussianMixture1D x = capped(random_atoms(src), power);
  const GaussianMixture1D xt = capped(random_atoms(src), power);
  const double sigma_sq = src.uniform(0.5, 2.0);
  const double ref_var = src.uniform(0.5, 4.0);
  const GaussianMixture1D y = x.convolve_gaussian(sigma_sq);
  const GaussianMixture1D yt = xt.convolve_gaussian(sigma_sq);

  out.outcomes.push_back(exact("moment_cap", std::max(x.second_moment(), xt.second_moment()), power));

  const Continuous h = entropy_of(y);
  const Continuous ht = entropy_of(yt);
  const Continuous w2 = wp_of(y, yt, 2);
  const double delta = w2lip_delta(sigma_sq, power, 1, w2.value);
  const double delta_err = w2lip_delta(sigma_sq, power, 1, w2.error);
  const bool cert = h.certified && ht.certified && w2.certified;
  out.outcomes.push_back({"tpr1", std::abs(h.value - ht.value), delta, h.error + ht.error + delta_err, 0.0, cert});

  const Continuous k1 = kl_of(y, yt);
  const Continuous k2 = kl_of(yt, y);
  out.outcomes.push_back({"tpr_kl", k1.value + k2.value, 2.0 * delta, k1.error + k2.error + 2.0 * delta_err, 0.0,
                          cert && k1.certified && k2.certified});

  const GaussianMixture1D ref = GaussianMixture1D::gaussian(0.0, ref_var);
  const Continuous w_ref = wp_of(y, ref, 2);
  const Continuous d_ref = kl_of(y, ref);
  const double tal = talagrand_w2_ub(d_ref.value, ref_var);
  const double tal_err = talagrand_w2_ub(d_ref.value + d_ref.error, ref_var) - tal;
  out.outcomes.push_back(
      {"talagrand", w_ref.value, tal, w_ref.error + tal_err, 0.0, w_ref.certified && d_ref.certified});
}

void family_best(Source& src, TrialResult& out) {
  const GaussianMixture1D b = random_atoms(src);
  const GaussianMixture1D bu = random_atoms(src);
  const double sigma_g = src.uniform(0.5, 2.0);
  const double sigma_u = src.uniform(0.5, 2.0);
  const GaussianMixture1D v = b.convolve_gaussian(sigma_g);
  const GaussianMixture1D u = bu.convolve_gaussian(sigma_u);
  const double sup = max_abs_atom(b);

  const Continuous hu = entropy_of(u);
  const Continuous hv = entropy_of(v);
  const Continuous w1 = wp_of(u, v, 1);
  const double rhs = best_bound(sigma_g, sup, u.second_moment(), v.second_moment(), w1.value);
  const double rhs_err = sup * w1.error / sigma_g;
  out.outcomes.push_back({"bd_best", hu.value - hv.value, rhs, hu.error + hv.error + rhs_err, 0.0,
                          hu.certified && hv.certified && w1.certified});
}

void family_cor_best(Source& src, TrialResult& out) {
  const GaussianMixture1D b = random_atoms(src);
  const GaussianMixture1D a = random_atoms(src);
  const double sigma_g = src.uniform(0.5, 2.0);
  const double sigma_z = src.uniform(0.5, 2.0);
  const double c = src.uniform(0.25, 1.0);
  const double sup = max_abs_atom(b);

  const GaussianMixture1D lhs_law = b.convolve(a).convolve_gaussian(sigma_z);
  const GaussianMixture1D rhs_law = b.convolve_gaussian(sigma_g + sigma_z);
  const Continuous h1 = entropy_of(lhs_law);
  const Continuous h2 = entropy_of(rhs_law);
  const Continuous kl =
      kl_of(a.convolve_gaussian(c * c * sigma_z), GaussianMixture1D::gaussian(0.0, sigma_g + c * c * sigma_z));

  const double rhs = cor_best_bound(sigma_g, sigma_z, c, sup, a.second_moment(), a.mean() * b.mean(), sigma_g, kl.value);
  const double spread = std::sqrt(2.0 * sup * sup * (sigma_g + c * c * sigma_z)) / (sigma_g + sigma_z);
  const double rhs_err = spread * (std::sqrt(kl.value + kl.error) - std::sqrt(kl.value));
  out.outcomes.push_back({"cor_best", h1.value - h2.value, rhs, h1.error + h2.error + rhs_err, 0.0,
                          h1.certified && h2.certified && kl.certified});
}

struct Shape {
  std::size_t k;
  std::size_t n;
};

constexpr Shape kJptShapes[] = {{2, 1}, {2, 2}, {2, 3}, {3, 1}, {3, 2}, {3, 3}};

void family_jpt(Source& src, TrialResult& out) {
  const Shape shape = kJptShapes[src.index(std::size(kJptShapes))];
  const Pmf p = random_pmf(src, shape.k, shape.n);
  const Pmf q = random_product(src, shape.k, shape.n);
  const double n = static_cast<double>(shape.n);

  const double hp = shannon_entropy(p);
  const double hq = shannon_entropy(q);
  const double d = dbar(p, q);
  const double kl = kl_discrete(p, q);
  out.outcomes.push_back(exact("jpt", std::abs(hp - hq), n * fano_fx(std::clamp(d, 0.0, 1.0), shape.k)));
  out.outcomes.push_back(exact("marton1", d, marton_dbar_ub(kl, shape.n)));
  out.outcomes.push_back(exact("chang", hp - hq, chang_one_sided_ub(kl, shape.n, shape.k)));
}

void family_dbar_props(Source& src, TrialResult& out) {
  const std::size_t kx = 2 + src.index(2);
  const std::size_t ka = 2 + src.index(2);
  const std::size_t ky = 2 + src.index(2);
  const std::size_t n = 1 + src.index(2);
  const TwoInputChannel w = floored_two_input(src, kx, ka, ky);
  const Pmf px = random_pmf(src, kx, n);
  const Pmf pa = random_pmf(src, ka, n);
  const Pmf pat = random_pmf(src, ka, n);

  const OutputFamily o = outputs(w, px, pa, pat);
  const double dy = dbar(o.p_y, o.p_ytilde);
  const double mean_cond = mean_conditional_dbar(px, o);
  const DbarBounds bounds = prop_dbar_bounds(w, o.p_y, o.p_ytilde, dy, mean_cond);

  out.outcomes.push_back(exact("c_floor", channel_log_ratio_c(w), std::log((1.0 - kChannelFloor) / kChannelFloor)));
  out.outcomes.push_back(exact("dbarH", std::abs(shannon_entropy(o.p_y) - shannon_entropy(o.p_ytilde)), bounds.h_bound));
  out.outcomes.push_back(
      exact("dbarD", kl_discrete(o.p_y, o.p_ytilde) + kl_discrete(o.p_ytilde, o.p_y), bounds.d_bound));
  const double i1 = mutual_information(px, o.p_y, o.y_given_x);
  const double i2 = mutual_information(px, o.p_ytilde, o.ytilde_given_x);
  out.outcomes.push_back(exact("dbarI", std::abs(i1 - i2), bounds.i_bound));
  out.outcomes.push_back(exact("dbar_convexity", dy, mean_cond));
}

void family_marton_chain(Source& src, TrialResult& out) {
  const std::size_t kx = 2 + src.index(2);
  const std::size_t ka = 2 + src.index(2);
  const std::size_t ky = 2 + src.index(2);
  const std::size_t n = 1 + src.index(2);
  const double nn = static_cast<double>(n);

  std::vector<Pmf> p_letters;
  std::vector<Pmf> q_letters;
  const Pmf p_prod = random_product(src, ka, n, &p_letters);
  const Pmf q_prod = random_product(src, ka, n, &q_letters);
  out.outcomes.push_back(exact("tensorization", dbar(p_prod, q_prod), dbar_tensorize_ub(p_letters, q_letters)));

  const Pmf pa1 = random_pmf(src, ka, n);
  const Pmf pa2 = random_pmf(src, ka, n);
  std::vector<Channel> kernels;
  for (std::size_t i = 0; i < n; ++i) kernels.push_back(floored_channel(src, ka, ky));
  const double dx = dbar(pa1, pa2);
  out.outcomes.push_back(exact("contraction", dbar(push_letters(pa1, kernels), push_letters(pa2, kernels)),
                               dbar_contraction_ub(std::clamp(dx, 0.0, 1.0), kernels)));

  const TwoInputChannel w = floored_two_input(src, kx, ka, ky);
  const Pmf px = random_pmf(src, kx, n);
  const Pmf pa = random_pmf(src, ka, n);
  const Pmf p0 = Pmf::from_weights(src.dirichlet(ka), ka);
  const Pmf pat = Pmf::product(std::vector<Pmf>(n, p0));
  const OutputFamily o = outputs(w, px, pa, pat);

  const double dy = dbar(o.p_y, o.p_ytilde);
  const double mean_cond = mean_conditional_dbar(px, o);
  const double da = dbar(pa, pat);
  const double kl_a = kl_discrete(pa, pat);
  const double eta = eta_tv_two_input(w);
  const double marton = marton_dbar_ub(kl_a, n);

  out.outcomes.push_back(exact("marton1", da, marton));
  out.outcomes.push_back(exact("gb1", dy, mean_cond));
  out.outcomes.push_back(exact("etatv_contraction", mean_cond, eta * da));
  out.outcomes.push_back(exact("dbar_etatv", dy, eta * marton));

  double gb2_rhs = 0.0;
  double cond_kl = 0.0;
  for (std::size_t i = 0; i < px.size(); ++i) {
    if (px[i] == 0.0) continue;
    const double d = kl_discrete(o.y_given_x[i], o.ytilde_given_x[i]);
    gb2_rhs += px[i] * std::sqrt(d / (2.0 * nn));
    cond_kl += px[i] * d;
  }
  out.outcomes.push_back(exact("gb2", mean_cond, gb2_rhs));
  out.outcomes.push_back(exact("gb4", std::sqrt(cond_kl / (2.0 * nn)), std::sqrt(1.0 * kl_a / (2.0 * nn))));
  out.outcomes.push_back(exact("gb_chain", dy, std::sqrt(1.0 * kl_a / (2.0 * nn))));
}

constexpr std::size_t kFcGrid = 200;

void family_fc(Source& src, TrialResult& out) {
  const std::size_t ka = 2 + src.index(2);
  const std::size_t kb = 2 + src.index(2);
  const Channel a_given_x = floored_channel(src, 2, ka);
  const Channel b_given_a = floored_channel(src, ka, kb);
  const Pmf joint = random_pmf(src, 2, 2);

  const FcCurve curve = fc_envelope(a_given_x, b_given_a, kFcGrid);
  const auto& knots = curve.knots;
  double above_diag = -kInfinity;
  double decrease = 0.0;
  double convexity = 0.0;
  for (std::size_t i = 0; i < knots.size(); ++i) {
    above_diag = std::max(above_diag, knots[i].fc - knots[i].t);
    if (i + 1 < knots.size()) decrease = std::max(decrease, knots[i].fc - knots[i + 1].fc);
    if (i + 2 < knots.size()) {
      const double s1 = (knots[i + 1].fc - knots[i].fc) / (knots[i + 1].t - knots[i].t);
      const double s2 = (knots[i + 2].fc - knots[i + 1].fc) / (knots[i + 2].t - knots[i + 1].t);
      convexity = std::max(convexity, s2 - s1);
    }
  }
  out.outcomes.push_back(exact("fc_origin", std::abs(curve(0.0)), 0.0));
  out.outcomes.push_back(exact("fc_below_diagonal", above_diag, 0.0));
  out.outcomes.push_back(exact("fc_nondecreasing", decrease, 0.0));
  out.outcomes.push_back(exact("fc_concave", convexity, 0.0));

  std::vector<std::vector<double>> composite;
  for (std::size_t x = 0; x < 2; ++x) {
    const Pmf row = b_given_a.push(Pmf(a_given_x.row(x), ka));
    composite.emplace_back(row.probs().begin(), row.probs().end());
  }
  const Channel chain(std::move(composite));
  const double h_xa = conditional_entropy_product(joint, a_given_x);
  const double h_xb = conditional_entropy_product(joint, chain);
  CheckOutcome sl = exact("sl", h_xa, 2.0 * curve(h_xb / 2.0));
  sl.allowance = 2.0 * curve.grid_err;
  out.outcomes.push_back(sl);

  if (curve.strict1 && curve.strict2) {
    const GCurve g = g_from_fc(curve);
    double g_decrease = 0.0;
    for (std::size_t i = 0; i + 1 < g.knots.size(); ++i) {
      g_decrease = std::max(g_decrease, g.knots[i].g - g.knots[i + 1].g);
    }
    out.outcomes.push_back(exact("g_origin", std::abs(g(0.0)), 0.0));
    out.outcomes.push_back(exact("g_nondecreasing", g_decrease, 0.0));
  } else {
    out.warnings.push_back("strictness conditions unset; g skipped");
  }
}

constexpr std::size_t kGicGrid = 101;

void family_gic_corner(Source& src, TrialResult& out, std::size_t index) {
  GicParams p;
  p.a = 1.0 - src.uniform();
  p.b = src.uniform(0.0, 2.0);
  p.p1 = 0.1 + 9.9 * (1.0 - src.uniform());
  p.p2 = 0.1 + 9.9 * (1.0 - src.uniform());

  const double c2 = gic_c2(p);
  const double c1p = corner_c1_prime(p.a, p.b, p.p1, p.p2).value;
  const RegionCurve inner = hk_inner_curve(p, kGicGrid);

  for (PowerConstraint pc : {PowerConstraint::almost_sure, PowerConstraint::average}) {
    p.constraint = pc;
    const std::string tag = pc == PowerConstraint::almost_sure ? "as" : "avg";
    const OuterBoundDetail at_c2 = outer_bound_detail(p, c2);
    out.outcomes.push_back(exact("corner_" + tag, std::abs(at_c2.r1 - c1p), 0.0));
    out.outcomes.push_back(exact("delta_at_c2_" + tag, std::abs(at_c2.delta), 0.0));

    CheckOutcome worst = exact("outer_dominates_inner_" + tag, 0.0, 0.0);
    double worst_slack = kInfinity;
    for (const RatePoint& pt : inner.points) {
      const double bound = outer_bound_r1(p, pt.r2);
      if (bound - pt.r1 < worst_slack) {
        worst_slack = bound - pt.r1;
        worst.lhs = pt.r1;
        worst.rhs = bound;
      }
    }
    out.outcomes.push_back(worst);

    const RegionCurve outer = outer_curve(p, kGicGrid);
    for (std::size_t i = 0; i + 1 < outer.points.size(); ++i) {
      if (outer.points[i + 1].r1 > outer.points[i].r1 + 1e-12) {
        out.warnings.push_back("trial " + std::to_string(index) + ": outer bound (" + tag +
                               ") increases in r2 near r2 = " + std::to_string(outer.points[i].r2));
        break;
      }
    }
  }

  p.constraint = PowerConstraint::almost_sure;
  const double first = outer_bound_detail(p, c2).first_term;
  out.outcomes.push_back(exact("sato_at_c2", std::abs(first - (1.0 + p.p1 + p.p2) / (1.0 + p.p2)), 0.0));

  const RegionCurve outer_as = outer_curve(p, kGicGrid);
  GicParams avg = p;
  avg.constraint = PowerConstraint::average;
  for (const RatePoint& pt : outer_as.points) {
    if (outer_bound_r1(avg, pt.r2) < pt.r1 - 1e-12) {
      out.warnings.push_back("trial " + std::to_string(index) + ": average bound below almost-sure bound at r2 = " +
                             std::to_string(pt.r2));
      break;
    }
  }
}

void family_discrete_corner(Source& src, TrialResult& out) {
  std::vector<double> w = src.dirichlet(3);
  for (auto& v : w) v = 0.01 + 0.97 * v;
  const Pmf p2 = Pmf::from_weights(w, 3);
  const DiscreteCornerReport r = discrete_corner(p2);
  const double h2 = shannon_entropy(p2);

  out.outcomes.push_back(exact("identity", std::abs(r.c1_prime + r.c2 - (std::log(3.0) - h2)), 0.0));
  out.outcomes.push_back(exact("c2_nonnegative", 0.0, r.c2));

  double grid_max = -kInfinity;
  constexpr int kGrid = 10000;
  for (int k = 0; k <= kGrid; ++k) {
    const double q = static_cast<double>(k) / kGrid;
    const double bern[3] = {1.0 - q, q, 0.0};
    grid_max = std::max(grid_max, shannon_entropy(cyclic_convolve(bern, p2.probs())) - h2);
  }
  out.outcomes.push_back(exact("grid_oracle", grid_max, r.c2));

  const double bern[3] = {1.0 - r.q_star, r.q_star, 0.0};
  const std::vector<double> p3 = cyclic_convolve(bern, p2.probs());
  double p3_err = 0.0;
  for (std::size_t i = 0; i < 3; ++i) p3_err = std::max(p3_err, std::abs(p3[i] - r.p3[i]));
  out.outcomes.push_back(exact("p3_consistency", p3_err, 0.0));
}

}  // namespace

TrialResult run_trial(Family family, std::uint64_t seed, std::size_t index) {
  Source src(trial_seed(seed, to_string(family), index));
  TrialResult out;
  switch (family) {
    case Family::ppr:
      family_ppr(src, out);
      break;
    case Family::w2lip:
      family_w2lip(src, out);
      break;
    case Family::best:
      family_best(src, out);
      break;
    case Family::cor_best:
      family_cor_best(src, out);
      break;
    case Family::jpt:
      family_jpt(src, out);
      break;
    case Family::dbar_props:
      family_dbar_props(src, out);
      break;
    case Family::marton_chain:
      family_marton_chain(src, out);
      break;
    case Family::fc:
      family_fc(src, out);
      break;
    case Family::gic_corner:
      family_gic_corner(src, out, index);
      break;
    case Family::discrete_corner:
      family_discrete_corner(src, out);
      break;
  }
  out.digest = src.digest();
  return out;
}

VerifyReport run_family(const TrialConfig& config) {
  if (config.trials < 1) throw InvalidArgument("trials must be at least 1");
  if (!(config.rhs_scale > 0.0)) throw InvalidArgument("rhs_scale must be positive");

  std::vector<TrialResult> results(config.trials);
  std::vector<std::string> errors(config.trials);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < config.trials; i = next++) {
      try {
        results[i] = run_trial(config.family, config.seed, i);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  std::size_t threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, config.trials);
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  VerifyReport report;
  report.family = config.family;
  report.seed = config.seed;
  report.trials_run = config.trials;
  report.tolerance = family_tolerance(config.family);
  report.min_slack = kInfinity;

  std::map<std::string, CheckSummary> summaries;
  double worst_trial_error = 0.0;
  double quadrature_slack = kInfinity;
  for (std::size_t i = 0; i < config.trials; ++i) {
    const TrialResult& r = results[i];
    if (!errors[i].empty()) {
      report.failures.push_back({i, "error: " + errors[i], r.digest, 0.0, 0.0, -kInfinity});
      report.certified = false;
      report.min_slack = -kInfinity;
      continue;
    }
    double trial_error = 0.0;
    for (const CheckOutcome& c : r.outcomes) {
      const double slack = c.slack(config.rhs_scale);
      CheckSummary& s = summaries[c.check];
      if (s.evaluations == 0) {
        s.check = c.check;
        s.min_slack = slack;
      }
      ++s.evaluations;
      s.min_slack = std::min(s.min_slack, slack);
      report.min_slack = std::min(report.min_slack, slack);
      trial_error += c.error;
      if (c.error > 0.0) quadrature_slack = std::min(quadrature_slack, slack);
      if (!c.certified) report.certified = false;
      if (!(slack >= -report.tolerance)) {
        ++s.failures;
        report.failures.push_back({i, c.check, r.digest, c.lhs, c.rhs * config.rhs_scale, slack});
      }
    }
    report.total_error += trial_error;
    worst_trial_error = std::max(worst_trial_error, trial_error);
    for (const auto& w : r.warnings) report.warnings.push_back(w);
  }
  for (auto& [name, s] : summaries) report.checks.push_back(s);
  // Only error-carrying checks enter the 10% rule.
  if (is_continuous(config.family) && worst_trial_error > 0.0 && !(worst_trial_error < 0.1 * quadrature_slack)) {
    report.certified = false;
  }
    return report;
}

namespace {

nlohmann::json number(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

nlohmann::json to_json(const VerifyReport& report) {
  nlohmann::json j;
  j["family"] = to_string(report.family);
  j["seed"] = report.seed;
  j["trials_run"] = report.trials_run;
  j["tolerance"] = report.tolerance;
  j["min_slack"] = number(report.min_slack);
  j["certified"] = report.certified;
  j["total_error"] = number(report.total_error);
  j["failures"] = nlohmann::json::array();
  for (const Failure& f : report.failures) {
    j["failures"].push_back({{"trial", f.trial},
                             {"check", f.check},
                             {"digest", hex64(f.digest)},
                             {"lhs", number(f.lhs)},
                             {"rhs", number(f.rhs)},
                             {"slack", number(f.slack)}});
  }
  j["checks"] = nlohmann::json::array();
  for (const CheckSummary& s : report.checks) {
    j["checks"].push_back(
        {{"check", s.check}, {"evaluations", s.evaluations}, {"failures", s.failures}, {"min_slack", number(s.min_slack)}});
  }
  j["warnings"] = report.warnings;
  return j;
}

std::string report_text(const VerifyReport& report) { return to_json(report).dump(2) + "\n"; }

}  // namespace wcont
