#include "oracles.hpp"

#include "degen/random.hpp"
#include "degen/semigroup.hpp"

#include <doctest.h>

using namespace degen;
using oracle::scalar_pair;

TEST_CASE("contour geometry and nodes") {
  ContourSpec c;
  c.alpha = 0.8;
  c.c = 0.5;
  c.eta_cut = 50.0;
  for (double eta : {-3.0, 0.0, 2.5}) {
    CHECK(c.point(eta) == Complex(-0.5 * std::pow(std::abs(eta) + 1.0, 0.8), eta));
    const double h = 1e-6;
    const Complex fd = (c.point(eta + h) - c.point(eta - h)) / (2 * h);
    if (eta != 0.0) CHECK(std::abs(fd - c.tangent(eta)) < 1e-6);
  }
  for (auto rule : {QuadratureRule::TrapezoidLogGraded, QuadratureRule::MidpointLogGraded,
                    QuadratureRule::Uniform}) {
    c.rule = rule;
    const auto nodes = half_nodes(c, 400);
    const bool trap = rule == QuadratureRule::TrapezoidLogGraded;
    REQUIRE(nodes.size() == (trap ? 401u : 400u));
    if (trap) CHECK(std::abs(nodes.back().eta - c.eta_cut) < 1e-12 * c.eta_cut);
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      CHECK(nodes[i].eta > 0.0);
      CHECK(nodes[i].eta < c.eta_cut * (1 + 1e-12));
      if (i) CHECK(nodes[i].eta > nodes[i - 1].eta);
      sum += nodes[i].weight;
    }
    // Weights integrate 1 over (0, eta_cut) up to the floor near 0.
    CHECK(std::abs(sum - c.eta_cut) < 1e-3 * c.eta_cut);
  }
}

TEST_CASE("truncation point") {
  const double t = 0.1, c = 0.5;
  const double cut = eta_cut_for(1.0, c, t, 0);
  CHECK(std::exp(-t * c * (cut + 1.0)) <= 1.0001 * default_config().trunc_tol);
  RunConfig tight;
  tight.eta_cut_cap = 10.0;
  CHECK_THROWS_AS(eta_cut_for(1.0, c, 1e-4, 0, tight), TruncationDominates);
}

TEST_CASE("scalar and diagonal examples") {
  const auto s = scalar_pair();
  const auto cs = oracle::certify_default(s);
  CHECK(std::abs(semigroup_apply(s, cs, 1.0, 0, Vector::Ones(1)).value(0) - std::exp(-1.0)) < 1e-7);
  const Matrix e2 = semigroup_matrix(s, cs, 2.0, 0);
  CHECK(std::abs(e2(0, 0) - std::exp(-2.0)) < 1e-7);

  const auto d = oracle::diag_pair({1, 1}, {-1, -2});
  const auto cd = oracle::certify_default(d);
  const Vector r = semigroup_apply(d, cd, 0.5, 1, Vector::Ones(2)).value;
  CHECK(std::abs(r(0) + std::exp(-0.5)) < 1e-7);
  CHECK(std::abs(r(1) + 2.0 * std::exp(-1.0)) < 1e-7);
  const Matrix m = semigroup_matrix(d, cd, 1.0, 0);
  CHECK(std::abs(m(0, 0) - std::exp(-1.0)) < 1e-7);
  CHECK(std::abs(m(1, 1) - std::exp(-2.0)) < 1e-7);
  CHECK(std::abs(m(0, 1)) < 1e-7);
}

TEST_CASE("t = 0 conventions") {
  const auto s = scalar_pair();
  const auto cs = oracle::certify_default(s);
  CHECK(semigroup_apply(s, cs, 0.0, 0, Vector::Ones(1)).value(0) == Complex(1.0, 0.0));
  CHECK_THROWS_AS(semigroup_apply(s, cs, 0.0, 1, Vector::Ones(1)), InvalidArgument);
  CHECK_THROWS_AS(semigroup_apply(s, cs, -1.0, 0, Vector::Ones(1)), InvalidArgument);
}

TEST_CASE("heat-16 matches the pencil eigendecomposition") {
  const auto& fx = oracle::fixture("degenerate-heat-16");
  const auto& P = fx.entry.problem.pair;
  const oracle::PencilEigen eig(P.M(), P.L());
  for (int j = 0; j < P.dim(); j += 3) {
    const Vector x = Matrix::Identity(P.dim(), P.dim()).col(j);
    const auto r = semigroup_apply(P, fx.cert, 0.1, 0, x);
    CHECK(oracle::rel_err(r.value, eig.apply(0.1, 0, x)) < 1e-6);
  }
}

TEST_CASE("real problems give real results") {
  const auto& fx = oracle::fixture("degenerate-heat-16");
  const auto& P = fx.entry.problem.pair;
  Rng rng(21);
  const Vector x = random_vector(P.dim(), rng, true);
  for (int n : {0, 1}) {
    const Vector v = semigroup_apply(P, fx.cert, 0.3, n, x).value;
    CHECK(v.imag().norm() <= 1e-8 * v.norm());
  }
}

TEST_CASE("semigroup_matrix columns are bitwise semigroup_apply") {
  const auto& fx = oracle::fixture("singular-mass-2");
  const auto& P = fx.entry.problem.pair;
  const Matrix m = semigroup_matrix(P, fx.cert, 0.4, 1);
  for (int j = 0; j < P.dim(); ++j) {
    const Vector col = semigroup_apply(P, fx.cert, 0.4, 1, Matrix::Identity(2, 2).col(j)).value;
    CHECK((m.col(j) - col).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("quadrature error estimate is a halving difference") {
  const auto s = scalar_pair();
  const auto cs = oracle::certify_default(s);
  RunConfig loose;
  loose.quad_tol = 1.0;
  ContourSpec c = contour_for(cs, 0.5, 0);
  c.n_nodes = 1600;
  const auto fine = semigroup_apply(s, cs, c, 0.5, 0, Vector::Ones(1), loose);
  c.n_nodes = 800;
  const auto coarse = semigroup_apply(s, cs, c, 0.5, 0, Vector::Ones(1), loose);
  CHECK(fine.nodes_used == 1600);
  CHECK(std::abs(fine.est_quad_error - (fine.value - coarse.value).norm()) <= 1e-15);
  CHECK(semigroup_apply(s, cs, 0.5, 0, Vector::Ones(1)).est_quad_error <= default_config().quad_tol);
}

TEST_CASE("node budget exhaustion") {
  const auto& fx = oracle::fixture("degenerate-heat-16");
  RunConfig cfg;
  cfg.quad_tol = 1e-18;
  cfg.node_budget = cfg.initial_nodes;
  CHECK_THROWS_AS(semigroup_apply(fx.entry.problem.pair, fx.cert, 0.1, 0, fx.entry.problem.u0, cfg),
                  NoConvergence);
}

TEST_CASE("semigroup law on the gallery") {
  for (const auto& name : {"degenerate-heat-16", "singular-mass-2"}) {
    const auto& fx = oracle::fixture(name);
    const auto& P = fx.entry.problem.pair;
    Rng rng(31);
    const Vector x = random_vector(P.dim(), rng);
    for (double t : {0.1, 0.5, 1.0})
      for (double s : {0.1, 0.5, 1.0}) {
        const Vector lhs = semigroup_apply(P, fx.cert, t + s, 0, x).value;
        const Vector rhs =
            semigroup_apply(P, fx.cert, t, 0, semigroup_apply(P, fx.cert, s, 0, x).value).value;
        CHECK((lhs - rhs).norm() <= 1e-6 * x.norm());
      }
  }
}

TEST_CASE("finite-difference generator consistency") {
  const auto& fx = oracle::fixture("degenerate-heat-16");
  const auto& P = fx.entry.problem.pair;
  const Vector x = fx.entry.problem.u0;
  const double t = 0.2;
  const Vector d = semigroup_apply(P, fx.cert, t, 1, x).value;
  const Vector e0 = semigroup_apply(P, fx.cert, t, 0, x).value;
  std::vector<double> err;
  for (double h : {1e-2, 5e-3, 2.5e-3}) {
    const Vector eh = semigroup_apply(P, fx.cert, t + h, 0, x).value;
    err.push_back(((eh - e0) / h - d).norm());
  }
  for (int i = 0; i + 1 < 3; ++i) CHECK(std::log2(err[i] / err[i + 1]) >= 0.9);
}

TEST_CASE("Laplace transform recovers the resolvent") {
  const auto& fx = oracle::fixture("singular-mass-2");
  const auto& P = fx.entry.problem.pair;
  const Vector x = Vector::Ones(2);
  const double lam = 2.0, T = 40.0;
  // Composite Simpson in t on [0, 40].
  const int n = 800;
  const double h = T / n;
  Vector acc = Vector::Zero(2);
  for (int i = 0; i <= n; ++i) {
    const double t = i * h;
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    acc += w * std::exp(-lam * t) * semigroup_apply(P, fx.cert, t, 0, x).value;
  }
  acc *= h / 3.0;
  // e^{0A} = I, but the right limit at 0 is M x for this pair; the integral
  // only sees the limit.
  acc += (h / 3.0) * (P.M() * x - x);
  CHECK(oracle::rel_err(acc, resolvent_apply(P, lam, x)) < 1e-4);
}

TEST_CASE("norm growth stays under the fitted constant") {
  const auto& fx = oracle::fixture("degenerate-heat-16");
  const auto& P = fx.entry.problem.pair;
  const oracle::PencilEigen eig(P.M(), P.L());
  for (int n : {0, 1}) {
    double ct = 0.0;
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < 7; ++i) {
      const double t = std::pow(10.0, -3.0 + 0.5 * i);
      const double v = Eigen::JacobiSVD<Matrix>(semigroup_matrix(P, fx.cert, t, n)).singularValues()(0);
      const double scaled = std::pow(t, (n + 1.0 - fx.cert.beta) / fx.cert.alpha) * v;
      ct = std::max(ct, scaled);
      pts.push_back({t, v});
      const double ref = Eigen::JacobiSVD<Matrix>(eig.matrix(t, n)).singularValues()(0);
      CHECK(std::abs(v - ref) <= 1e-6 * std::max(ref, 1.0));
    }
    for (auto [t, v] : pts)
      CHECK(v <= ct * std::pow(t, (fx.cert.beta - n - 1.0) / fx.cert.alpha) * (1 + 1e-12));
  }
}
