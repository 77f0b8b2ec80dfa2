#pragma once

#include "degen/operator_core.hpp"

#include <limits>
#include <vector>

namespace degen {

/// (gamma, p) of the intermediate space X_A^{gamma,p}; p = infinity is the
/// sup variant.
struct InterpolationIndex {
  double gamma = 0.5;
  double p = 2.0;

  static constexpr double inf = std::numeric_limits<double>::infinity();

  bool p_is_inf() const noexcept { return p == inf; }
  /// Throws InvalidArgument unless 0 < gamma < 1 and p >= 1.
  void validate() const;
};

struct InterpNormReport {
  double x_norm = 0.0;
  double seminorm = 0.0;
  double total = 0.0;
  double xi_min = 0.0;
  double xi_max = 0.0;
  /// Part of the seminorm contributed by the power-law tails outside the window.
  double tail_estimate = 0.0;
  bool converged = false;
};

/// ||x|| + ||xi^gamma A (xi - A)^{-1} x||_{L^p_*} on (0, infinity), with
/// A(xi - A)^{-1} x evaluated as L(xi M - L)^{-1} x. The window
/// [xi_min, xi_max] is covered by a midpoint rule in log xi and the two
/// tails are extrapolated as power laws.
///
/// The node operators are factorized once, so one evaluator serves many
/// vectors.
class InterpolationNorm {
 public:
  InterpolationNorm(const OperatorPair& pair, InterpolationIndex idx,
                    const RunConfig& cfg = default_config());

  InterpNormReport operator()(const Vector& x) const;

  /// sup over the columns of `probes` of total(images.col(j)) / ||probes.col(j)||.
  /// Node values are computed for every column; for p = infinity the sup
  /// refinement between nodes is run on the leading candidates only.
  double ratio_sup(const Matrix& images, const Matrix& probes) const;

  /// Unit vectors along which the map with the given matrix is largest in
  /// this norm, read off the top eigenvectors of Gram matrices: the plain
  /// part, the strongest nodes for p = infinity, the whole window otherwise.
  Matrix ascent_directions(const Matrix& images_of_basis) const;

  const InterpolationIndex& index() const noexcept { return idx_; }
  const std::vector<double>& log_nodes() const noexcept { return s_; }

 private:
  double phi(double s, const Vector& x) const;
  InterpNormReport assemble(const Vector& x, const Eigen::VectorXd& node_values) const;

  const OperatorPair* pair_;
  InterpolationIndex idx_;
  RunConfig cfg_;
  std::vector<double> s_;   // log xi at the nodes
  std::vector<Matrix> B_;   // xi^gamma L (xi M - L)^{-1}
};

InterpNormReport interp_norm(const OperatorPair& pair, const InterpolationIndex& idx,
                             const Vector& x, const RunConfig& cfg = default_config());

/// Surrogate operator norm of a linear map into X_A^{gamma,p}: sup of
/// interp_norm(map x).total / ||x|| over the basis vectors, 2*dim seeded
/// random vectors and the ascent directions of the map.
double interp_operator_norm(const OperatorPair& pair, const InterpolationIndex& idx,
                            const LinearMap& apply, const RunConfig& cfg = default_config());

/// Same for a map given as a matrix.
double interp_operator_norm(const OperatorPair& pair, const InterpolationIndex& idx,
                            const Matrix& B, const RunConfig& cfg = default_config());

/// The probe set used by interp_operator_norm: identity columns followed by
/// 2*dim random columns drawn from cfg.seed.
Matrix interp_probe_set(int dim, bool real_only, const RunConfig& cfg = default_config());

}  // namespace degen
