#include "oracles.hpp"

#include "degen/operator_core.hpp"
#include "degen/random.hpp"

#include <doctest.h>

using namespace degen;
using oracle::diag_pair;
using oracle::scalar_pair;

TEST_CASE("pencil_solve small examples") {
  const auto s = scalar_pair();
  CHECK(std::abs(pencil_solve(s, 0.0, Vector::Ones(1))(0) - 1.0) < 1e-15);

  const auto d = diag_pair({1, 0}, {-1, -2});
  const Vector y = pencil_solve(d, 1.0, Vector::Ones(2));
  CHECK(std::abs(y(0) - 0.5) < 1e-15);
  CHECK(std::abs(y(1) - 0.5) < 1e-15);
}

TEST_CASE("pencil_solve on heat-16 matches an independent dense solve") {
  const auto e = build_gallery("degenerate-heat-16");
  const auto& P = e.problem.pair;
  Rng rng(7);
  const Vector rhs = random_vector(P.dim(), rng);
  const Complex lam(0.0, 1.0);
  const Matrix pencil = lam * P.M() - P.L();
  const Vector ref = pencil.fullPivHouseholderQr().solve(rhs);
  CHECK(oracle::rel_err(pencil_solve(P, lam, rhs), ref) < 1e-10);
  const Vector y = pencil_solve(P, lam, rhs);
  CHECK((pencil * y - rhs).norm() <= default_config().solve_tol(P.dim()) * rhs.norm());
}

TEST_CASE("pencil_solve rejects eigenvalues") {
  const auto d = diag_pair({1, 0}, {-1, -2});
  CHECK_THROWS_AS(pencil_solve(d, -1.0, Vector::Ones(2)), SingularPencil);
  const auto d2 = diag_pair({1, 1}, {-1, -2});
  CHECK_THROWS_AS(pencil_solve(d2, Complex(-1.0 + 1e-15, 0.0), Vector::Ones(2)), IllConditioned);
}

TEST_CASE("resolvent_apply small examples") {
  CHECK(std::abs(resolvent_apply(scalar_pair(), 1.0, Vector::Ones(1))(0) - 0.5) < 1e-15);
  const Vector r = resolvent_apply(diag_pair({1, 0}, {-1, -2}), 3.0, Vector::Ones(2));
  CHECK(std::abs(r(0) - 0.25) < 1e-15);
  CHECK(std::abs(r(1)) == 0.0);
}

TEST_CASE("resolvent_apply on heat-16 matches a two-solve composite") {
  const auto e = build_gallery("degenerate-heat-16");
  const auto& P = e.problem.pair;
  const Complex lam(2.0, 5.0);
  for (int j = 0; j < P.dim(); ++j) {
    const Vector x = Matrix::Identity(P.dim(), P.dim()).col(j);
    // (lambda - A)^{-1} x = M s with (lambda M - L) s = x; check via the pencil residual.
    const Vector s = (lam * P.M() - P.L()).partialPivLu().solve(x);
    const Vector r = resolvent_apply(P, lam, x);
    CHECK(oracle::rel_err(r, P.M() * s) < 1e-10);
  }
}

TEST_CASE("resolvent identity and linearity") {
  const auto e = build_gallery("degenerate-heat-16");
  const auto& P = e.problem.pair;
  Rng rng(11);
  const Complex lam(1.0, 2.0), mu(3.0, -1.0);
  for (int trial = 0; trial < 4; ++trial) {
    const Vector x = random_vector(P.dim(), rng);
    const Vector lhs = resolvent_apply(P, lam, x) - resolvent_apply(P, mu, x);
    const Vector rhs = (mu - lam) * resolvent_apply(P, lam, resolvent_apply(P, mu, x));
    CHECK(oracle::rel_err(lhs, rhs) < 1e-8);

    const Vector y = random_vector(P.dim(), rng);
    const Complex a(0.3, -1.2), b(-2.0, 0.5);
    const Vector sup = resolvent_apply(P, lam, a * x + b * y);
    const Vector sep = a * resolvent_apply(P, lam, x) + b * resolvent_apply(P, lam, y);
    CHECK(oracle::rel_err(sup, sep) < 1e-10);
  }
}

TEST_CASE("identity mass reduces to a direct dense solve") {
  Rng rng(3);
  Matrix L(6, 6);
  for (int j = 0; j < 6; ++j) L.col(j) = random_vector(6, rng);
  L -= 10.0 * Matrix::Identity(6, 6);
  const OperatorPair P(Matrix::Identity(6, 6), L);
  const Complex lam(0.5, 0.25);
  const Vector x = random_vector(6, rng);
  const Vector ref = (lam * Matrix::Identity(6, 6) - L).fullPivLu().solve(x);
  CHECK(oracle::rel_err(resolvent_apply(P, lam, x), ref) < 1e-10);
}

TEST_CASE("operator_norm examples") {
  CHECK(std::abs(operator_norm(Matrix::Identity(4, 4)) - 1.0) < 1e-12);
  Matrix D = Matrix::Zero(2, 2);
  D(0, 0) = 3.0;
  D(1, 1) = -4.0;
  CHECK(std::abs(operator_norm(D) - 4.0) < 1e-12);
  const LinearMap map = [&](const Vector& x) -> Vector { return D * x; };
  CHECK(std::abs(operator_norm(map, 2) - 4.0) < 1e-12);

  Rng rng(5);
  Matrix B(8, 8);
  for (int j = 0; j < 8; ++j) B.col(j) = random_vector(8, rng);
  // Largest singular value from the eigenvalues of B^* B.
  Eigen::SelfAdjointEigenSolver<Matrix> es(B.adjoint() * B);
  const double ref = std::sqrt(es.eigenvalues().maxCoeff());
  CHECK(std::abs(operator_norm(B) - ref) < 1e-8 * ref);
  CHECK(std::abs(operator_norm(B, NormKind::LInf) - B.cwiseAbs().rowwise().sum().maxCoeff()) <
        1e-12);
}

TEST_CASE("operator_norm rejects nonlinear maps") {
  const LinearMap bad = [](const Vector& x) -> Vector { return x.cwiseAbs2(); };
  CHECK_THROWS_AS(operator_norm(bad, 3), NonLinearMap);
}

TEST_CASE("operator_norm power iteration with an adjoint") {
  RunConfig cfg;
  cfg.dense_threshold = 2;
  Rng rng(9);
  Matrix B(6, 6);
  for (int j = 0; j < 6; ++j) B.col(j) = random_vector(6, rng);
  const LinearMap map = [&](const Vector& x) -> Vector { return B * x; };
  const LinearMap adj = [&](const Vector& x) -> Vector { return B.adjoint() * x; };
  const double ref = Eigen::JacobiSVD<Matrix>(B).singularValues()(0);
  CHECK(std::abs(operator_norm(map, 6, NormKind::L2, cfg, &adj) - ref) < 1e-8 * ref);
}

TEST_CASE("domain_norm examples") {
  const OperatorPair I2(Matrix::Identity(2, 2), -Matrix::Identity(2, 2));
  Vector x(2);
  x << 1.0, 0.0;
  CHECK(std::abs(domain_norm(I2, x).total - 2.0) < 1e-14);
  CHECK_THROWS_AS(domain_norm(diag_pair({1, 0}, {-1, -2}), Vector::Ones(2)), NotInDomain);

  const auto e = build_gallery("degenerate-heat-16");
  const auto& P = e.problem.pair;
  Rng rng(13);
  const Vector w = random_vector(P.dim(), rng, true);
  const Vector y = P.M() * w;
  const double ref = y.norm() + (P.L() * w).norm();
  const auto r = domain_norm(P, y);
  CHECK(std::abs(r.total - ref) <= 1e-9 * ref);
  CHECK(r.total == r.x_norm + r.Ax_norm);
}

TEST_CASE("generator and its inverse") {
  const auto d = diag_pair({1, 0}, {-1, -2});
  Vector x(2);
  x << 3.0, 0.0;
  CHECK(std::abs(apply_generator(d, x)(0) + 3.0) < 1e-14);
  const Vector y = apply_inverse_generator(d, Vector::Ones(2));
  CHECK(std::abs(y(0) + 1.0) < 1e-14);
  CHECK(std::abs(y(1)) == 0.0);
}

TEST_CASE("OperatorPair validates its inputs") {
  CHECK_THROWS_AS(OperatorPair(Matrix::Identity(2, 2), Matrix::Identity(3, 3)), Error);
  CHECK_THROWS_AS(OperatorPair(Matrix::Identity(2, 2), Matrix::Zero(2, 2)), Error);
}
