#include "wcont/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace wcont {

double to_base(double nats, LogBase base) {
  return base == LogBase::nats ? nats : nats / std::numbers::ln2;
}

std::string to_string(LogBase base) { return base == LogBase::nats ? "nats" : "bits"; }

std::string to_string(CurveKind kind) { return kind == CurveKind::inner ? "inner" : "outer"; }

LogBase parse_log_base(const std::string& text) {
  if (text == "nats") return LogBase::nats;
  if (text == "bits") return LogBase::bits;
  throw InvalidArgument("log base must be 'nats' or 'bits', got '" + text + "'");
}

std::size_t product_size(std::size_t alphabet_size, std::size_t n) {
  if (alphabet_size == 0 || n == 0) throw InvalidArgument("alphabet size and block length must be positive");
  std::size_t total = 1;
  for (std::size_t j = 0; j < n; ++j) {
    if (total > kMaxProductSize / alphabet_size) {
      throw InvalidArgument("product space |X|^n exceeds " + std::to_string(kMaxProductSize));
    }
    total *= alphabet_size;
  }
  return total;
}

std::size_t index_encode(std::span<const Symbol> letters, std::size_t alphabet_size) {
  if (alphabet_size == 0) throw InvalidArgument("alphabet size must be positive");
  std::size_t index = 0;
  for (Symbol s : letters) {
    if (s >= alphabet_size) {
      throw InvalidArgument("letter " + std::to_string(s) + " outside alphabet of size " +
                            std::to_string(alphabet_size));
    }
    index = index * alphabet_size + s;
  }
  return index;
}

SymbolString index_decode(std::size_t index, std::size_t alphabet_size, std::size_t n) {
  if (index >= product_size(alphabet_size, n)) throw InvalidArgument("index out of range");
  SymbolString letters(n);
  for (std::size_t j = n; j-- > 0;) {
    letters[j] = static_cast<Symbol>(index % alphabet_size);
    index /= alphabet_size;
  }
  return letters;
}

std::size_t hamming_distance(std::span<const Symbol> x, std::span<const Symbol> y) {
  if (x.size() != y.size()) throw InvalidArgument("hamming_distance: length mismatch");
  std::size_t d = 0;
  for (std::size_t j = 0; j < x.size(); ++j) d += (x[j] != y[j]);
  return d;
}

// ---------------------------------------------------------------------------

namespace {

void clamp_and_renormalize(std::vector<double>& p) {
  double sum = 0.0;
  for (double& v : p) {
    if (v < kClampThreshold) v = 0.0;
    sum += v;
  }
  for (double& v : p) v /= sum;
}

}  // namespace

Pmf::Pmf(std::vector<double> probs, std::size_t alphabet_size, std::size_t n)
    : alphabet_size_(alphabet_size), n_(n), probs_(std::move(probs)) {
  if (probs_.size() != product_size(alphabet_size, n)) {
    throw InvariantViolation("pmf: probs has length " + std::to_string(probs_.size()) +
                             ", expected alphabet_size^n = " +
                             std::to_string(product_size(alphabet_size, n)));
  }
  double sum = 0.0;
  for (double v : probs_) {
    if (!std::isfinite(v) || v < 0.0) throw InvariantViolation("pmf: probs contains a negative or non-finite entry");
    sum += v;
  }
  if (std::abs(sum - 1.0) > kNormTolerance) {
    throw InvariantViolation("pmf: probs not normalized (sum = " + std::to_string(sum) + ")");
  }
  clamp_and_renormalize(probs_);
}

Pmf Pmf::from_weights(std::vector<double> weights, std::size_t alphabet_size, std::size_t n) {
  double sum = 0.0;
  for (double v : weights) {
    if (!std::isfinite(v) || v < 0.0) throw InvariantViolation("pmf: weights contain a negative or non-finite entry");
    sum += v;
  }
  if (!(sum > 0.0)) throw InvariantViolation("pmf: weights sum to zero");
  for (double& v : weights) v /= sum;
  // Two passes: the first division can leave |sum - 1| at a few ulps.
  clamp_and_renormalize(weights);
  Pmf out;
  out.alphabet_size_ = alphabet_size;
  out.n_ = n;
  out.probs_ = std::move(weights);
  if (out.probs_.size() != product_size(alphabet_size, n)) throw InvariantViolation("pmf: weight vector has wrong length");
  return out;
}

Pmf Pmf::uniform(std::size_t alphabet_size, std::size_t n) {
  return from_weights(std::vector<double>(product_size(alphabet_size, n), 1.0), alphabet_size, n);
}

Pmf Pmf::point_mass(std::size_t index, std::size_t alphabet_size, std::size_t n) {
  std::vector<double> p(product_size(alphabet_size, n), 0.0);
  if (index >= p.size()) throw InvalidArgument("point_mass: index out of range");
  p[index] = 1.0;
  return Pmf(std::move(p), alphabet_size, n);
}

Pmf Pmf::bernoulli(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("bernoulli: p must lie in [0,1]");
  return from_weights({1.0 - p, p}, 2, 1);
}

Pmf Pmf::product(std::span<const Pmf> letters) {
  if (letters.empty()) throw InvalidArgument("product: no letters");
  const std::size_t k = letters.front().size();
  for (const Pmf& l : letters) {
    if (l.block_length() != 1 || l.size() != k) throw InvalidArgument("product: letters must share a single-letter alphabet");
  }
  const std::size_t n = letters.size();
  const std::size_t total = product_size(k, n);
  std::vector<double> p(total, 1.0);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    double v = 1.0;
    for (std::size_t j = n; j-- > 0;) {
      v *= letters[j][rest % k];
      rest /= k;
    }
    p[idx] = v;
  }
  return from_weights(std::move(p), k, n);
}

Pmf Pmf::marginal(std::size_t coordinate) const {
  if (coordinate >= n_) throw InvalidArgument("marginal: coordinate out of range");
  std::vector<double> m(alphabet_size_, 0.0);
  std::size_t stride = 1;
  for (std::size_t j = coordinate + 1; j < n_; ++j) stride *= alphabet_size_;
  for (std::size_t idx = 0; idx < probs_.size(); ++idx) m[(idx / stride) % alphabet_size_] += probs_[idx];
  return from_weights(std::move(m), alphabet_size_, 1);
}

// ---------------------------------------------------------------------------

namespace {

void check_stochastic_row(const std::vector<double>& row, const std::string& what) {
  double sum = 0.0;
  for (double v : row) {
    if (!std::isfinite(v) || v < 0.0) throw InvariantViolation(what + ": negative or non-finite entry");
    sum += v;
  }
  if (std::abs(sum - 1.0) > kNormTolerance) {
    throw InvariantViolation(what + ": row not normalized (sum = " + std::to_string(sum) + ")");
  }
}

}  // namespace

Channel::Channel(std::vector<std::vector<double>> rows) : rows_(std::move(rows)) {
  if (rows_.empty() || rows_.front().empty()) throw InvariantViolation("channel: empty matrix");
  for (std::size_t x = 0; x < rows_.size(); ++x) {
    if (rows_[x].size() != rows_.front().size()) throw InvariantViolation("channel: ragged rows");
    check_stochastic_row(rows_[x], "channel row " + std::to_string(x));
  }
}

Channel Channel::identity(std::size_t size) {
  std::vector<std::vector<double>> rows(size, std::vector<double>(size, 0.0));
  for (std::size_t i = 0; i < size; ++i) rows[i][i] = 1.0;
  return Channel(std::move(rows));
}

Channel Channel::bsc(double crossover) {
  if (!(crossover >= 0.0 && crossover <= 1.0)) throw InvalidArgument("bsc: crossover must lie in [0,1]");
  return Channel({{1.0 - crossover, crossover}, {crossover, 1.0 - crossover}});
}

Channel Channel::additive_mod(std::span<const double> noise) {
  const std::size_t k = noise.size();
  std::vector<std::vector<double>> rows(k, std::vector<double>(k, 0.0));
  for (std::size_t x = 0; x < k; ++x)
    for (std::size_t z = 0; z < k; ++z) rows[x][(x + z) % k] = noise[z];
  return Channel(std::move(rows));
}

Pmf Channel::push(const Pmf& input) const {
  if (input.block_length() != 1 || input.size() != input_size()) throw InvalidArgument("channel push: dimension mismatch");
  std::vector<double> out(output_size(), 0.0);
  for (std::size_t x = 0; x < input_size(); ++x)
    for (std::size_t y = 0; y < output_size(); ++y) out[y] += input[x] * rows_[x][y];
  return Pmf::from_weights(std::move(out), output_size(), 1);
}

Pmf Channel::push_product(const Pmf& input) const {
  if (input.alphabet_size() != input_size()) throw InvalidArgument("channel push: alphabet mismatch");
  const std::size_t n = input.block_length();
  const std::size_t kx = input_size();
  const std::size_t ky = output_size();
  // Apply the kernel one coordinate at a time; intermediate arrays mix
  // already-mapped (output) and pending (input) coordinates.
  std::vector<double> cur(input.probs().begin(), input.probs().end());
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t outer = 1;
    for (std::size_t t = 0; t < j; ++t) outer *= ky;
    std::size_t inner = 1;
    for (std::size_t t = j + 1; t < n; ++t) inner *= kx;
    std::vector<double> next(outer * ky * inner, 0.0);
    for (std::size_t o = 0; o < outer; ++o)
      for (std::size_t x = 0; x < kx; ++x)
        for (std::size_t i = 0; i < inner; ++i) {
          const double v = cur[(o * kx + x) * inner + i];
          if (v == 0.0) continue;
          for (std::size_t y = 0; y < ky; ++y) next[(o * ky + y) * inner + i] += v * rows_[x][y];
        }
    cur = std::move(next);
  }
  return Pmf::from_weights(std::move(cur), ky, n);
}

TwoInputChannel::TwoInputChannel(std::vector<std::vector<std::vector<double>>> entries) : w_(std::move(entries)) {
  if (w_.empty() || w_.front().empty() || w_.front().front().empty()) throw InvariantViolation("two-input channel: empty");
  for (std::size_t x = 0; x < w_.size(); ++x) {
    if (w_[x].size() != w_.front().size()) throw InvariantViolation("two-input channel: ragged a-dimension");
    for (std::size_t a = 0; a < w_[x].size(); ++a) {
      if (w_[x][a].size() != w_.front().front().size()) throw InvariantViolation("two-input channel: ragged y-dimension");
      check_stochastic_row(w_[x][a], "two-input channel entry [" + std::to_string(x) + "][" + std::to_string(a) + "]");
    }
  }
}

Channel TwoInputChannel::slice(std::size_t x) const {
  if (x >= x_size()) throw InvalidArgument("slice: x out of range");
  return Channel(w_[x]);
}

// ---------------------------------------------------------------------------

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

double normal_cdf(double z) { return 0.5 * std::erfc(-z * kInvSqrt2); }

}  // namespace

GaussianMixture1D::GaussianMixture1D(std::vector<MixtureComponent> components) : components_(std::move(components)) {
  if (components_.empty()) throw InvariantViolation("mixture: no components");
  double sum = 0.0;
  for (const auto& c : components_) {
    if (!std::isfinite(c.weight) || c.weight < 0.0) throw InvariantViolation("mixture: weight must be non-negative");
    if (!std::isfinite(c.mean)) throw InvariantViolation("mixture: mean must be finite");
    if (!std::isfinite(c.variance) || c.variance < 0.0) throw InvariantViolation("mixture: variance must be non-negative");
    sum += c.weight;
  }
  if (std::abs(sum - 1.0) > kNormTolerance) {
    throw InvariantViolation("mixture: weights not normalized (sum = " + std::to_string(sum) + ")");
  }
}

GaussianMixture1D GaussianMixture1D::gaussian(double mean, double variance) {
  return GaussianMixture1D({{1.0, mean, variance}});
}

GaussianMixture1D GaussianMixture1D::atoms(std::span<const double> locations, std::span<const double> weights) {
  if (locations.size() != weights.size()) throw InvalidArgument("atoms: size mismatch");
  std::vector<MixtureComponent> comps;
  comps.reserve(locations.size());
  for (std::size_t i = 0; i < locations.size(); ++i) comps.push_back({weights[i], locations[i], 0.0});
  return GaussianMixture1D(std::move(comps));
}

double GaussianMixture1D::mean() const {
  double m = 0.0;
  for (const auto& c : components_) m += c.weight * c.mean;
  return m;
}

double GaussianMixture1D::second_moment() const {
  double m = 0.0;
  for (const auto& c : components_) m += c.weight * (c.mean * c.mean + c.variance);
  return m;
}

double GaussianMixture1D::first_abs_moment() const {
  double m = 0.0;
  for (const auto& c : components_) {
    if (c.variance == 0.0) {
      m += c.weight * std::abs(c.mean);
      continue;
    }
    const double s = std::sqrt(c.variance);
    const double folded = s * std::sqrt(2.0 / std::numbers::pi) * std::exp(-c.mean * c.mean / (2.0 * c.variance)) +
                          c.mean * (1.0 - 2.0 * normal_cdf(-c.mean / s));
    m += c.weight * folded;
  }
  return m;
}

double GaussianMixture1D::max_abs_mean() const {
  double m = 0.0;
  for (const auto& c : components_) m = std::max(m, std::abs(c.mean));
  return m;
}

bool GaussianMixture1D::has_atoms() const {
  return std::ranges::any_of(components_, [](const auto& c) { return c.variance == 0.0; });
}

bool GaussianMixture1D::all_atoms() const {
  return std::ranges::all_of(components_, [](const auto& c) { return c.variance == 0.0; });
}

double GaussianMixture1D::min_mean() const {
  return std::ranges::min_element(components_, {}, &MixtureComponent::mean)->mean;
}

double GaussianMixture1D::max_mean() const {
  return std::ranges::max_element(components_, {}, &MixtureComponent::mean)->mean;
}

double GaussianMixture1D::max_std() const {
  return std::sqrt(std::ranges::max_element(components_, {}, &MixtureComponent::variance)->variance);
}

GaussianMixture1D GaussianMixture1D::convolve_gaussian(double sigma_sq) const {
  if (!(sigma_sq > 0.0) || !std::isfinite(sigma_sq)) throw InvalidArgument("convolve_gaussian: sigma_sq must be positive");
  auto comps = components_;
  for (auto& c : comps) c.variance += sigma_sq;
  return GaussianMixture1D(std::move(comps));
}

GaussianMixture1D GaussianMixture1D::convolve(const GaussianMixture1D& other) const {
  std::vector<MixtureComponent> comps;
  comps.reserve(size() * other.size());
  for (const auto& a : components_)
    for (const auto& b : other.components_) comps.push_back({a.weight * b.weight, a.mean + b.mean, a.variance + b.variance});
  double sum = 0.0;
  for (const auto& c : comps) sum += c.weight;
  for (auto& c : comps) c.weight /= sum;
  return GaussianMixture1D(std::move(comps));
}

GaussianMixture1D GaussianMixture1D::scaled(double s) const {
  auto comps = components_;
  for (auto& c : comps) {
    c.mean *= s;
    c.variance *= s * s;
  }
  return GaussianMixture1D(std::move(comps));
}

double GaussianMixture1D::log_density(double x) const {
  // Max-exponent factoring keeps tails representable far beyond 8 sigma.
  double max_term = -std::numeric_limits<double>::infinity();
  thread_local std::vector<double> terms;
  terms.resize(components_.size());
  for (std::size_t k = 0; k < components_.size(); ++k) {
    const auto& c = components_[k];
    if (c.variance <= 0.0) throw InvalidArgument("log_density: mixture has an atom");
    if (c.weight == 0.0) {
      terms[k] = -std::numeric_limits<double>::infinity();
      continue;
    }
    const double d = x - c.mean;
    terms[k] = std::log(c.weight) - 0.5 * std::log(2.0 * std::numbers::pi * c.variance) - d * d / (2.0 * c.variance);
    max_term = std::max(max_term, terms[k]);
  }
  double s = 0.0;
  for (double t : terms) s += std::exp(t - max_term);
  return max_term + std::log(s);
}

double GaussianMixture1D::density(double x) const { return std::exp(log_density(x)); }

double GaussianMixture1D::score(double x) const {
  double max_term = -std::numeric_limits<double>::infinity();
  thread_local std::vector<double> terms;
  terms.resize(components_.size());
  for (std::size_t k = 0; k < components_.size(); ++k) {
    const auto& c = components_[k];
    if (c.variance <= 0.0) throw InvalidArgument("score: mixture has an atom");
    if (c.weight == 0.0) {
      terms[k] = -std::numeric_limits<double>::infinity();
      continue;
    }
    const double d = x - c.mean;
    terms[k] = std::log(c.weight) - 0.5 * std::log(c.variance) - d * d / (2.0 * c.variance);
    max_term = std::max(max_term, terms[k]);
  }
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < components_.size(); ++k) {
    const double r = std::exp(terms[k] - max_term);
    num += r * (components_[k].mean - x) / components_[k].variance;
    den += r;
  }
  return num / den;
}

double GaussianMixture1D::cdf(double x) const {
  double F = 0.0;
  for (const auto& c : components_) {
    if (c.variance == 0.0) {
      F += (x >= c.mean) ? c.weight : 0.0;
    } else {
      F += c.weight * normal_cdf((x - c.mean) / std::sqrt(c.variance));
    }
  }
  return F;
}

double GaussianMixture1D::survival(double x) const {
  double S = 0.0;
  for (const auto& c : components_) {
    if (c.variance == 0.0) {
      S += (x < c.mean) ? c.weight : 0.0;
    } else {
      S += c.weight * normal_cdf(-(x - c.mean) / std::sqrt(c.variance));
    }
  }
  return S;
}

}  // namespace wcont
