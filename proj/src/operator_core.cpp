#include "degen/operator_core.hpp"

#include "degen/random.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <cmath>
#include <string>

namespace degen {

OperatorPair::OperatorPair(Matrix M, Matrix L, NormKind norm, const RunConfig& cfg)
    : M_(std::move(M)), L_(std::move(L)), norm_(norm) {
  if (M_.rows() == 0 || M_.rows() != M_.cols() || L_.rows() != L_.cols() ||
      M_.rows() != L_.rows())
    throw ValidationError("M and L must be square matrices of the same dimension");
  if (!M_.allFinite() || !L_.allFinite())
    throw ValidationError("M and L must have finite entries");
  real_ = M_.imag().isZero(0.0) && L_.imag().isZero(0.0);
  L_lu_.compute(L_);
  const double rc = L_lu_.rcond();
  if (!(rc > 1.0 / cfg.max_condition))
    throw ValidationError("L is not invertible (reciprocal condition " + std::to_string(rc) + ")");
}

PencilFactor::PencilFactor(const OperatorPair& pair, Complex lambda, const RunConfig& cfg)
    : pair_(&pair), lambda_(lambda), solve_tol_(cfg.solve_tol(pair.dim())) {
  pencil_ = lambda * pair.M() - pair.L();
  lu_.compute(pencil_);
  const auto& lu = lu_.matrixLU();
  for (Eigen::Index i = 0; i < lu.rows(); ++i) {
    if (lu(i, i) == Complex(0.0, 0.0) || !std::isfinite(std::abs(lu(i, i))))
      throw SingularPencil("lambda*M - L is singular at lambda = (" + std::to_string(lambda.real()) +
                           ", " + std::to_string(lambda.imag()) + ")");
  }
  rcond_ = lu_.rcond();
  if (!(rcond_ > 1.0 / cfg.max_condition))
    throw IllConditioned("lambda*M - L is ill-conditioned at lambda = (" +
                         std::to_string(lambda.real()) + ", " + std::to_string(lambda.imag()) +
                         "), rcond " + std::to_string(rcond_));
}

Vector PencilFactor::solve(const Vector& rhs) const {
  Vector y = lu_.solve(rhs);
  const double rn = rhs.norm();
  if (rn == 0.0) return y;
  Vector r = rhs - pencil_ * y;
  if (r.norm() <= solve_tol_ * rn) return y;
  y += lu_.solve(r);
  r = rhs - pencil_ * y;
  if (r.norm() > solve_tol_ * rn)
    throw IllConditioned("pencil residual " + std::to_string(r.norm() / rn) +
                         " exceeds solve_tol after refinement");
  return y;
}

Complex PencilFactor::det_phase() const {
  Complex phase = lu_.permutationP().determinant() < 0 ? Complex(-1.0, 0.0) : Complex(1.0, 0.0);
  const auto& lu = lu_.matrixLU();
  for (Eigen::Index i = 0; i < lu.rows(); ++i) {
    phase *= lu(i, i) / std::abs(lu(i, i));
    phase /= std::abs(phase);
  }
  return phase;
}

Vector pencil_solve(const OperatorPair& pair, Complex lambda, const Vector& rhs,
                    const RunConfig& cfg) {
  if (rhs.size() != pair.dim()) throw InvalidArgument("pencil_solve: dimension mismatch");
  return PencilFactor(pair, lambda, cfg).solve(rhs);
}

Vector resolvent_apply(const OperatorPair& pair, Complex lambda, const Vector& x,
                       const RunConfig& cfg) {
  return pair.M() * pencil_solve(pair, lambda, x, cfg);
}

Vector apply_inverse_generator(const OperatorPair& pair, const Vector& x) {
  return pair.M() * pair.solve_L(x);
}

RangeSolve solve_in_range(const OperatorPair& pair, const Vector& x) {
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(pair.M());
  RangeSolve out;
  out.w = cod.solve(x);
  const double xn = x.norm();
  out.residual = xn == 0.0 ? 0.0 : (pair.M() * out.w - x).norm() / xn;
  return out;
}

Vector apply_generator(const OperatorPair& pair, const Vector& x, const RunConfig& cfg) {
  const RangeSolve rs = solve_in_range(pair, x);
  if (rs.residual > cfg.range_tol)
    throw NotInDomain("vector is not in the range of M (relative residual " +
                      std::to_string(rs.residual) + ")");
  return pair.L() * rs.w;
}

DomainNormReport domain_norm(const OperatorPair& pair, const Vector& x, const RunConfig& cfg) {
  DomainNormReport r;
  r.x_norm = pair.norm_of(x);
  r.Ax_norm = pair.norm_of(apply_generator(pair, x, cfg));
  r.total = r.x_norm + r.Ax_norm;
  return r;
}

Matrix materialize(const LinearMap& apply, int dim) {
  Matrix B(dim, dim);
  for (int j = 0; j < dim; ++j) {
    Vector e = Vector::Zero(dim);
    e(j) = 1.0;
    B.col(j) = apply(e);
  }
  return B;
}

namespace {

void check_linearity(const LinearMap& apply, int dim, const RunConfig& cfg) {
  Rng rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  const Vector x = random_vector(dim, rng);
  const Vector y = random_vector(dim, rng);
  const Complex a(0.7, -1.3);
  const Vector lhs = apply(a * x + y);
  const Vector rhs = a * apply(x) + apply(y);
  const double scale = std::max({lhs.norm(), rhs.norm(), 1e-300});
  if ((lhs - rhs).norm() > 1e-8 * scale)
    throw NonLinearMap("operator_norm: map failed the superposition check");
}

// Largest eigenvalue of the Hermitian positive semidefinite H by power
// iteration on repeated squares of H.
}  // namespace

double operator_norm(const Matrix& B, NormKind kind, const RunConfig& cfg) {
  if (B.size() == 0) return 0.0;
  if (kind == NormKind::LInf) return B.cwiseAbs().rowwise().sum().maxCoeff();
  (void)cfg;
  return Eigen::JacobiSVD<Matrix>(B).singularValues()(0);
}

double operator_norm(const LinearMap& apply, int dim, NormKind kind, const RunConfig& cfg,
                     const LinearMap* adjoint) {
  if (dim <= 0) throw InvalidArgument("operator_norm: dim must be positive");
  check_linearity(apply, dim, cfg);
  if (dim <= cfg.dense_threshold) return operator_norm(materialize(apply, dim), kind, cfg);
  if (kind == NormKind::LInf || adjoint == nullptr)
    throw InvalidArgument("operator_norm: dimension above dense_threshold needs an adjoint callback");

  Rng rng(cfg.seed);
  Vector v = random_vector(dim, rng);
  v.normalize();
  double rho = 0.0;
  for (int it = 0; it < cfg.max_power_iters; ++it) {
    Vector w = (*adjoint)(apply(v));
    const double next = v.dot(w).real();
    const double wn = w.norm();
    if (wn == 0.0) return 0.0;
    v = w / wn;
    if (it > 0 && std::abs(next - rho) <= cfg.power_iter_tol * std::abs(next))
      return std::sqrt(std::max(0.0, next));
    rho = next;
  }
  throw NoConvergence("power iteration did not converge within max_power_iters");
}

}  // namespace degen
