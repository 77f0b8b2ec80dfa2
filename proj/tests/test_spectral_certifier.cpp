#include "oracles.hpp"

#include "degen/semigroup.hpp"

#include <doctest.h>

using namespace degen;
using oracle::scalar_pair;

namespace {

bool in_region(Complex z, double alpha, double c) {
  return z.real() >= -c * std::pow(std::abs(z.imag()) + 1.0, alpha);
}

std::vector<ResolventSample> synthetic(double power) {
  std::vector<ResolventSample> out;
  for (Complex z : probe_points(RegionProbePlan{}, 1.0, 1.0))
    out.push_back({z, std::pow(std::abs(z) + 1.0, -power)});
  return out;
}

}  // namespace

TEST_CASE("probe grid layout") {
  const RegionProbePlan plan;
  const auto pts = probe_points(plan, 1.0, 0.5);
  CHECK(pts.size() >= 32);
  bool has_zero = false, has_up = false, has_down = false;
  for (Complex z : pts) {
    has_zero = has_zero || z == Complex(0.0, 0.0);
    has_up = has_up || z.imag() > 0.0;
    has_down = has_down || z.imag() < 0.0;
    CHECK(in_region(z, 1.0, 0.5 * (1.0 + 1e-12)));
  }
  CHECK(has_zero);
  CHECK(has_up);
  CHECK(has_down);
}

TEST_CASE("probe_resolvent_norms small examples") {
  const auto s = scalar_pair();
  for (const auto& smp : probe_resolvent_norms(s, RegionProbePlan{}, 1.0, 0.5)) {
    const double ref = 1.0 / std::abs(smp.lambda + 1.0);
    CHECK(std::abs(smp.norm - ref) <= 1e-12 * ref);
  }
  const auto d = oracle::diag_pair({1, 0}, {-1, -2});
  for (const auto& smp : probe_resolvent_norms(d, RegionProbePlan{}, 1.0, 0.25))
    if (smp.lambda == Complex(0.0, 0.0)) CHECK(std::abs(smp.norm - 1.0) < 1e-14);
}

TEST_CASE("heat-16 region alpha=1, c=0.1 misses the pencil spectrum") {
  const auto e = build_gallery("degenerate-heat-16");
  const auto& P = e.problem.pair;
  const oracle::PencilEigen eig(P.M(), P.L());
  for (Complex mu : eig.finite_eigenvalues()) CHECK_FALSE(in_region(mu, 1.0, 0.1));
  CHECK(count_pencil_eigenvalues(P, 1.0, 0.1, 1e3) == 0);
  const auto smp = probe_resolvent_norms(P, RegionProbePlan{}, 1.0, 0.1);
  for (const auto& s : smp) CHECK(std::isfinite(s.norm));
}

TEST_CASE("argument principle counts enclosed eigenvalues") {
  // Eigenvalues -1 and -2; the region with c = 3 swallows both.
  const auto d = oracle::diag_pair({1, 1}, {-1, -2});
  CHECK(count_pencil_eigenvalues(d, 1.0, 3.0, 1e3) == 2);
  CHECK(count_pencil_eigenvalues(d, 1.0, 0.5, 1e3) == 0);
  CHECK(count_pencil_eigenvalues(d, 1.0, 1.5, 1e3) == 1);
}

TEST_CASE("fit on an exact power law") {
  const auto cert = fit_certificate(synthetic(0.5), 1.0, 1.0);
  CHECK(std::abs(cert.beta - 0.5) <= 0.01);
  CHECK(cert.residual <= default_config().fit_tol);
  CHECK_THROWS_AS(fit_certificate(synthetic(-0.2), 1.0, 1.0), InsufficientDecay);
}

TEST_CASE("beta is clamped below alpha") {
  const auto cert = fit_certificate(synthetic(1.3), 0.9, 1.0);
  CHECK(cert.beta == doctest::Approx(0.9 - default_config().beta_gap));
  CHECK(cert.beta < cert.alpha);
}

TEST_CASE("too few samples are rejected") {
  auto few = synthetic(0.5);
  few.resize(10);
  CHECK_THROWS_AS(fit_certificate(few, 1.0, 1.0), InvalidArgument);
}

TEST_CASE("scalar pair: fit on the right half-plane") {
  const auto s = scalar_pair();
  std::vector<ResolventSample> right;
  for (const auto& smp : probe_resolvent_norms(s, RegionProbePlan{}, 1.0, 0.25))
    if (smp.lambda.real() >= 0.0) right.push_back(smp);
  const auto cert = fit_certificate(right, 1.0, 0.25);
  CHECK(std::abs(cert.beta - 1.0) <= 0.05);
  CHECK(cert.C <= std::sqrt(2.0) + 0.1);
}

TEST_CASE("scalar pair: certified constant matches the closed-form supremum") {
  const auto s = scalar_pair();
  const auto cert = oracle::certify_default(s);
  CHECK(cert.alpha == 1.0);
  CHECK(std::abs(cert.beta - 1.0) <= 0.05);
  // sup over the region of (|z|+1)^beta / |z+1|, brute force on a polar-ish grid.
  double sup = 0.0;
  for (int i = 0; i <= 4000; ++i) {
    const double eta = i < 2000 ? i * 1e-3 : 2.0 * std::pow(500.0, (i - 2000) / 2000.0);
    for (int k = 0; k <= 200; ++k) {
      const double re = -cert.c * (eta + 1.0) + k * (0.05 * (eta + 1.0));
      const Complex z(re, eta);
      sup = std::max(sup, std::pow(std::abs(z) + 1.0, cert.beta) / std::abs(z + 1.0));
    }
  }
  CHECK(std::abs(cert.C - sup) <= 0.05 * sup);
  CHECK(cert.residual <= default_config().fit_tol);
}

TEST_CASE("certificate invariants") {
  const auto s = scalar_pair();
  const auto cert = oracle::certify_default(s);
  cert.validate();
  for (const auto& smp : cert.samples)
    if (cert.contains(smp.lambda)) CHECK(smp.norm <= cert.bound(smp.lambda) * (1.0 + cert.residual) + 1e-15);

  SectorCertificate bad = cert;
  bad.beta = 1.0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("revalidation on a larger sample set never improves the fit") {
  const auto s = scalar_pair();
  const auto cert = oracle::certify_default(s);
  RegionProbePlan fine;
  fine.n_boundary *= 2;
  fine.n_interior *= 2;
  auto uni = cert.samples;
  for (const auto& smp : probe_resolvent_norms(s, fine, cert.alpha, cert.c)) uni.push_back(smp);
  CHECK(revalidate(cert, uni) >= revalidate(cert, cert.samples));
}

TEST_CASE("region search prefers larger alpha, then larger c") {
  const auto d = oracle::diag_pair({1, 0}, {-1, -2});
  std::vector<RegionProbe> attempts;
  const auto cert = certify(d, RegionProbePlan{}, {1.0, 0.8}, {4.0, 0.25}, default_config(), &attempts);
  // c = 4 encloses the eigenvalue -1, so the search falls to alpha = 1, c = 0.25.
  CHECK(cert.alpha == 1.0);
  CHECK(cert.c == 0.25);
  REQUIRE(attempts.size() >= 2);
  CHECK_FALSE(attempts[0].ok);
  CHECK(attempts[1].ok);
}

TEST_CASE("certificates drive finite quadrature for all t") {
  const auto& fx = oracle::fixture("degenerate-heat-16");
  const Vector x = fx.entry.problem.u0;
  for (double t : {1e-3, 1e-1, 1.0, 10.0}) {
    const auto r = semigroup_apply(fx.entry.problem.pair, fx.cert, t, 0, x);
    CHECK(r.value.allFinite());
  }
}

TEST_CASE("jordan-cascade-32: beta below one and stable under refinement") {
  const auto& fx = oracle::fixture("jordan-cascade-32");
  CHECK(fx.cert.beta < 1.0);
  RegionProbePlan fine;
  fine.n_boundary *= 2;
  fine.n_interior *= 2;
  const auto refined = certify(fx.entry.problem.pair, fine, {fx.cert.alpha}, {fx.cert.c});
  CHECK(std::abs(refined.beta - fx.cert.beta) <= 0.05);
  REQUIRE(fx.entry.expected);
  CHECK(std::abs(fx.cert.beta - fx.entry.expected->beta) <= 0.05);
}
