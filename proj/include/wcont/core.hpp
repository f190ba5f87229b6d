#ifndef WCONT_CORE_HPP
#define WCONT_CORE_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace wcont {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// A caller-supplied argument violates an operation's precondition.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A data object (pmf, channel, mixture, file) breaks one of its invariants.
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical routine could not reach its accuracy target.
class NumericFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Units
// ---------------------------------------------------------------------------

/// Presentation unit for information quantities. Everything is computed in
/// nats; bits only appear when values leave the library.
enum class LogBase { nats, bits };

double to_base(double nats, LogBase base);
std::string to_string(LogBase base);
LogBase parse_log_base(const std::string& text);

// ---------------------------------------------------------------------------
// Product-space indexing
// ---------------------------------------------------------------------------

using Symbol = std::uint32_t;
using SymbolString = std::vector<Symbol>;

inline constexpr std::size_t kMaxProductSize = 1'000'000;

/// alphabet_size^n, or throws when the product space exceeds kMaxProductSize.
std::size_t product_size(std::size_t alphabet_size, std::size_t n);

/// Base-|X| positional index; letter 0 is the most significant digit.
std::size_t index_encode(std::span<const Symbol> letters, std::size_t alphabet_size);
SymbolString index_decode(std::size_t index, std::size_t alphabet_size, std::size_t n);

std::size_t hamming_distance(std::span<const Symbol> x, std::span<const Symbol> y);

// ---------------------------------------------------------------------------
// Pmf
// ---------------------------------------------------------------------------

inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kClampThreshold = 1e-15;

/// Probability mass function on X^n stored flat in index_encode order.
class Pmf {
 public:
  /// Validates |sum - 1| <= 1e-12 and non-negativity, then clamps entries
  /// below 1e-15 to zero and renormalizes.
  Pmf(std::vector<double> probs, std::size_t alphabet_size, std::size_t n = 1);

  /// Renormalizes arbitrary non-negative weights (at least one positive).
  static Pmf from_weights(std::vector<double> weights, std::size_t alphabet_size,
                          std::size_t n = 1);
  static Pmf uniform(std::size_t alphabet_size, std::size_t n = 1);
  static Pmf point_mass(std::size_t index, std::size_t alphabet_size, std::size_t n = 1);
  static Pmf bernoulli(double p);

  std::size_t alphabet_size() const { return alphabet_size_; }
  std::size_t block_length() const { return n_; }
  std::size_t size() const { return probs_.size(); }
  std::span<const double> probs() const { return probs_; }
  double operator[](std::size_t i) const { return probs_[i]; }

  /// Product pmf P_1 x ... x P_n of single-letter pmfs over a common alphabet.
  static Pmf product(std::span<const Pmf> letters);

  /// Marginal of coordinate j (single-letter pmf).
  Pmf marginal(std::size_t coordinate) const;

  friend bool operator==(const Pmf&, const Pmf&) = default;

 private:
  Pmf() = default;
  std::size_t alphabet_size_ = 0;
  std::size_t n_ = 0;
  std::vector<double> probs_;
};

// ---------------------------------------------------------------------------
// Channels
// ---------------------------------------------------------------------------

/// Stochastic matrix, one output pmf per input symbol.
class Channel {
 public:
  explicit Channel(std::vector<std::vector<double>> rows);

  static Channel identity(std::size_t size);
  static Channel bsc(double crossover);
  /// Y = X + Z mod k with Z ~ noise.
  static Channel additive_mod(std::span<const double> noise);

  std::size_t input_size() const { return rows_.size(); }
  std::size_t output_size() const { return rows_.front().size(); }
  const std::vector<double>& row(std::size_t x) const { return rows_[x]; }
  double operator()(std::size_t y, std::size_t x) const { return rows_[x][y]; }
  const std::vector<std::vector<double>>& rows() const { return rows_; }

  /// Output pmf induced by input pmf p (single letter).
  Pmf push(const Pmf& input) const;
  /// Output pmf of the memoryless extension applied to a pmf on X^n.
  Pmf push_product(const Pmf& input) const;

  friend bool operator==(const Channel&, const Channel&) = default;

 private:
  std::vector<std::vector<double>> rows_;
};

/// Per-letter two-input kernel W(y | x, a), indexed [x][a][y].
class TwoInputChannel {
 public:
  explicit TwoInputChannel(std::vector<std::vector<std::vector<double>>> entries);

  std::size_t x_size() const { return w_.size(); }
  std::size_t a_size() const { return w_.front().size(); }
  std::size_t y_size() const { return w_.front().front().size(); }
  double operator()(std::size_t y, std::size_t x, std::size_t a) const { return w_[x][a][y]; }
  const std::vector<std::vector<std::vector<double>>>& entries() const { return w_; }

  /// Channel a -> y with x held fixed.
  Channel slice(std::size_t x) const;

  friend bool operator==(const TwoInputChannel&, const TwoInputChannel&) = default;

 private:
  std::vector<std::vector<std::vector<double>>> w_;
};

// ---------------------------------------------------------------------------
// 1-D Gaussian mixtures
// ---------------------------------------------------------------------------

struct MixtureComponent {
  double weight = 0.0;
  double mean = 0.0;
  double variance = 0.0;  // 0 marks a pure atom

  friend bool operator==(const MixtureComponent&, const MixtureComponent&) = default;
};

class GaussianMixture1D {
 public:
  explicit GaussianMixture1D(std::vector<MixtureComponent> components);

  static GaussianMixture1D gaussian(double mean, double variance);
  static GaussianMixture1D atoms(std::span<const double> locations, std::span<const double> weights);

  std::span<const MixtureComponent> components() const { return components_; }
  std::size_t size() const { return components_.size(); }

  double mean() const;
  double second_moment() const;
  /// E|X| (exact for atoms; closed form folded-normal for Gaussian parts).
  double first_abs_moment() const;
  double max_abs_mean() const;
  bool has_atoms() const;
  bool all_atoms() const;
  double min_mean() const;
  double max_mean() const;
  double max_std() const;

  /// Convolution with N(0, sigma_sq): every variance grows by sigma_sq.
  GaussianMixture1D convolve_gaussian(double sigma_sq) const;
  /// Law of X + Y for independent mixtures X, Y.
  GaussianMixture1D convolve(const GaussianMixture1D& other) const;
  /// Law of s * X.
  GaussianMixture1D scaled(double s) const;

  /// Requires all variances > 0.
  double log_density(double x) const;
  double density(double x) const;
  /// d/dx log p(x); requires all variances > 0.
  double score(double x) const;
  double cdf(double x) const;
  double survival(double x) const;

  friend bool operator==(const GaussianMixture1D&, const GaussianMixture1D&) = default;

 private:
  std::vector<MixtureComponent> components_;
};

// ---------------------------------------------------------------------------
// Couplings
// ---------------------------------------------------------------------------

/// Dense matrix stored row-major.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}
  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

struct CouplingPlan {
  Matrix joint;
  double cost_value = 0.0;
  /// Dual potentials certifying optimality: phi_i + psi_j <= cost_ij.
  std::vector<double> phi;
  std::vector<double> psi;
  std::size_t pivots = 0;
};

// ---------------------------------------------------------------------------
// Rate regions
// ---------------------------------------------------------------------------

/// Rate pair in nats.
struct RatePoint {
  double r1 = 0.0;
  double r2 = 0.0;
};

enum class CurveKind { inner, outer };

std::string to_string(CurveKind kind);

struct RegionCurve {
  CurveKind kind = CurveKind::outer;
  std::vector<RatePoint> points;
};

}  // namespace wcont

#endif  // WCONT_CORE_HPP
