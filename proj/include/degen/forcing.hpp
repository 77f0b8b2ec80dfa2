#pragma once

#include "degen/types.hpp"

#include <vector>

namespace degen {

/// Piecewise-polynomial forcing t -> f(t) in C^dim. Piece j starts at
/// starts()[j] and runs to the next start; the first and last pieces extend
/// to -inf and +inf. Coefficients are local Taylor coefficients about the
/// piece start. The declared Holder exponent mu travels with the data.
class Forcing {
 public:
  enum class Kind { Polynomial, Samples };

  /// f(t) = sum_k coeffs[k] t^k.
  static Forcing polynomial(std::vector<Vector> coeffs, double mu);
  /// Piecewise-linear interpolation of (times[i], values[i]); times strictly
  /// increasing and starting at 0.
  static Forcing samples(std::vector<double> times, std::vector<Vector> values, double mu);
  static Forcing zero(int dim);

  Kind kind() const noexcept { return kind_; }
  int dim() const noexcept { return dim_; }
  double mu() const noexcept { return mu_; }
  int degree() const noexcept { return degree_; }

  /// f^{(k)}(t); at a piece start `left` selects the limit from below.
  Vector derivative(double t, int k, bool left = false) const;
  Vector value(double t) const { return derivative(t, 0); }

  const std::vector<double>& starts() const noexcept { return starts_; }
  int piece_count() const noexcept { return static_cast<int>(starts_.size()); }
  /// Index of the piece holding t (left limit when `left`).
  int piece_of(double t, bool left) const;
  /// f^{(k)} of piece j evaluated at t.
  Vector piece_derivative(int j, double t, int k) const;

  /// Raw data as given to the factory, for serialization.
  const std::vector<Vector>& poly_coeffs() const noexcept { return raw_coeffs_; }
  const std::vector<double>& sample_times() const noexcept { return raw_times_; }
  const std::vector<Vector>& sample_values() const noexcept { return raw_values_; }

 private:
  Forcing() = default;

  Kind kind_ = Kind::Polynomial;
  int dim_ = 0;
  double mu_ = 1.0;
  int degree_ = 0;
  std::vector<double> starts_;
  std::vector<std::vector<Vector>> coeffs_;
  std::vector<Vector> raw_coeffs_;
  std::vector<double> raw_times_;
  std::vector<Vector> raw_values_;
};

}  // namespace degen
