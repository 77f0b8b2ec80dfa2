#pragma once

#include "degen/config.hpp"
#include "degen/errors.hpp"
#include "degen/types.hpp"

#include <Eigen/LU>

namespace degen {

/// The pair (M, L) of the degenerate problem D_t(Mv) = Lv + f. The generator
/// A = L M^{-1}, with domain M(D(L)), is never formed: every action of A,
/// its resolvent or its inverse is a composition of solves against M, L or
/// the pencil lambda*M - L.
class OperatorPair {
 public:
  OperatorPair(Matrix M, Matrix L, NormKind norm = NormKind::L2,
               const RunConfig& cfg = default_config());

  int dim() const noexcept { return static_cast<int>(M_.rows()); }
  const Matrix& M() const noexcept { return M_; }
  const Matrix& L() const noexcept { return L_; }
  NormKind norm() const noexcept { return norm_; }

  /// True when both matrices have zero imaginary part.
  bool is_real() const noexcept { return real_; }

  double norm_of(const Vector& x) const { return vector_norm(x, norm_); }

  /// L^{-1} y using the factorization validated at construction.
  Vector solve_L(const Vector& y) const { return L_lu_.solve(y); }

 private:
  Matrix M_;
  Matrix L_;
  NormKind norm_;
  bool real_;
  Eigen::PartialPivLU<Matrix> L_lu_;
};

/// LU factorization of lambda*M - L with the conditioning checks shared by
/// every pencil solve.
class PencilFactor {
 public:
  PencilFactor(const OperatorPair& pair, Complex lambda,
               const RunConfig& cfg = default_config());

  /// y = (lambda M - L)^{-1} rhs, with one step of iterative refinement when
  /// the residual misses solve_tol.
  Vector solve(const Vector& rhs) const;

  /// Plain back-substitution without the residual check, for quadrature
  /// loops where the conditioning check at factorization time suffices.
  Vector solve_unchecked(const Vector& rhs) const { return lu_.solve(rhs); }

  Complex lambda() const noexcept { return lambda_; }
  double rcond() const noexcept { return rcond_; }

  /// Unit-modulus phase of det(lambda M - L).
  Complex det_phase() const;

 private:
  const OperatorPair* pair_;
  Complex lambda_;
  Matrix pencil_;
  Eigen::PartialPivLU<Matrix> lu_;
  double rcond_;
  double solve_tol_;
};

/// y = (lambda M - L)^{-1} rhs.
Vector pencil_solve(const OperatorPair& pair, Complex lambda, const Vector& rhs,
                    const RunConfig& cfg = default_config());

/// (lambda I - A)^{-1} x computed as M (lambda M - L)^{-1} x.
Vector resolvent_apply(const OperatorPair& pair, Complex lambda, const Vector& x,
                       const RunConfig& cfg = default_config());

/// A^{-1} x = M L^{-1} x.
Vector apply_inverse_generator(const OperatorPair& pair, const Vector& x);

/// A x = L w for the minimum-norm w with M w = x. Throws NotInDomain when x
/// is not in the range of M within range_tol.
Vector apply_generator(const OperatorPair& pair, const Vector& x,
                       const RunConfig& cfg = default_config());

/// Minimum-norm w with M w = x together with the relative range residual.
struct RangeSolve {
  Vector w;
  double residual = 0.0;
};
RangeSolve solve_in_range(const OperatorPair& pair, const Vector& x);

struct DomainNormReport {
  double x_norm = 0.0;
  double Ax_norm = 0.0;
  double total = 0.0;
};

/// ||x||_{D(A)} = ||x|| + ||Ax||.
DomainNormReport domain_norm(const OperatorPair& pair, const Vector& x,
                             const RunConfig& cfg = default_config());

/// Dense matrix of a linear map, column j = apply(e_j).
Matrix materialize(const LinearMap& apply, int dim);

/// Operator norm of a linear map. For the l2 convention this is the largest
/// singular value: dense SVD up to dense_threshold, power iteration on the
/// composition with the adjoint above it. For l-infinity it is the maximum
/// absolute row sum. The map is checked for linearity on a seeded random
/// pair first.
double operator_norm(const LinearMap& apply, int dim, NormKind kind = NormKind::L2,
                     const RunConfig& cfg = default_config(),
                     const LinearMap* adjoint = nullptr);

/// Same as above for an explicit matrix.
double operator_norm(const Matrix& B, NormKind kind = NormKind::L2,
                     const RunConfig& cfg = default_config());

}  // namespace degen
