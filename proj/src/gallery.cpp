#include "degen/gallery.hpp"

#include <cmath>
#include <numbers>

namespace degen {

namespace {

int parse_size(const std::string& name, const std::string& prefix) {
  const std::string digits = name.substr(prefix.size());
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos ||
      digits.size() > 6)
    throw UnknownEntry("unknown gallery entry '" + name + "'");
  const int n = std::stoi(digits);
  if (n < 2) throw InvalidArgument("gallery size must be at least 2");
  return n;
}

/// Forcing (1+t) w with v0 given; u0 and g0 follow.
ProblemInstance with_data(const std::string& name, Matrix M, Matrix L, const Vector& w,
                          const Vector& v0, const RunConfig& cfg) {
  OperatorPair pair(std::move(M), std::move(L), cfg.norm, cfg);
  Forcing f = Forcing::polynomial({w, w}, 0.9);
  Vector u0 = pair.M() * v0;
  Vector g0 = pair.L() * v0 + w;
  ProblemInstance p{std::move(pair), std::move(f), std::move(u0), 1.0, v0, g0};
  try {
    p.validate(cfg);
  } catch (const ValidationError& e) {
    throw ValidationError(name + ": " + e.what());
  }
  return p;
}

}  // namespace

std::vector<std::string> gallery_names() {
  return {"analytic-diag-64", "degenerate-heat-16", "jordan-cascade-32", "singular-mass-2"};
}

GalleryEntry build_gallery(const std::string& name, const RunConfig& cfg) {
  struct {
    int param = 0;
    std::optional<ProblemInstance> problem;
    std::optional<ExpectedCertificate> expected;
    std::string notes;
  } e;
  const auto starts = [&](const char* p) { return name.rfind(p, 0) == 0; };

  if (starts("analytic-diag-")) {
    const int n = parse_size(name, "analytic-diag-");
    e.param = n;
    Matrix L = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) L(i, i) = -(i + 1.0);
    const Vector v0 = Vector::Ones(n) / std::sqrt(double(n));
    e.problem.emplace(with_data(name, Matrix::Identity(n, n), L, Vector::Constant(n, 0.1), v0, cfg));
    e.expected = ExpectedCertificate{1.0, 1.0, "sampling oracle: ||(lambda-A)^{-1}|| = max 1/|lambda+k|"};
    e.notes = "analytic reference, beta = 1";
  } else if (starts("degenerate-heat-")) {
    const int n = parse_size(name, "degenerate-heat-");
    e.param = n;
    const double h = 1.0 / (n + 1);
    Matrix M = Matrix::Zero(n, n), L = Matrix::Zero(n, n);
    Vector v0(n), w(n);
    for (int i = 0; i < n; ++i) {
      const double x = (i + 1) * h;
      M(i, i) = x;
      L(i, i) = -2.0 / (h * h);
      if (i > 0) L(i, i - 1) = 1.0 / (h * h);
      if (i + 1 < n) L(i, i + 1) = 1.0 / (h * h);
      v0(i) = std::sin(std::numbers::pi * x);
      w(i) = x;
    }
    e.problem.emplace(with_data(name, M, L, w, v0, cfg));
    e.expected = ExpectedCertificate{1.0, 0.535, "certify at two resolutions"};
    e.notes = "mass m(x) = x vanishing at the left end";
  } else if (starts("jordan-cascade-")) {
    const int nb = parse_size(name, "jordan-cascade-");
    e.param = nb;
    const int n = 2 * nb;
    Matrix L = Matrix::Zero(n, n);
    for (int k = 0; k < nb; ++k) {
      const double mag = std::pow(10.0, 3.0 * k / (nb - 1));
      const double b = (k % 2 == 0) ? mag : -mag;
      const Complex lam(-std::pow(std::abs(b) + 1.0, 0.9), b);
      L(2 * k, 2 * k) = lam;
      L(2 * k + 1, 2 * k + 1) = lam;
      L(2 * k, 2 * k + 1) = std::pow(std::abs(b) + 1.0, 1.2);
    }
    const Vector v0 = Vector::Ones(n) / std::sqrt(double(n));
    e.problem.emplace(with_data(name, Matrix::Identity(n, n), L, Vector::Constant(n, 0.5), v0, cfg));
    e.expected = ExpectedCertificate{1.0, 0.61, "certify at two resolutions"};
    e.notes = "eigenvalues on Re z = -(|Im z|+1)^0.9 with coupling (|Im z|+1)^1.2";
  } else if (name == "singular-mass-2") {
    e.param = 2;
    Matrix M = Matrix::Zero(2, 2), L = Matrix::Zero(2, 2);
    M(0, 0) = 1.0;
    L(0, 0) = -1.0;
    L(1, 1) = -2.0;
    Vector w(2), v0(2);
    w << 1.0, 1.0;
    v0 << 1.0, 0.5;
    e.problem.emplace(with_data(name, M, L, w, v0, cfg));
    e.expected = ExpectedCertificate{1.0, 1.0, "closed form M(lambda M - L)^{-1} = diag(1/(lambda+1), 0)"};
    e.notes = "smallest degenerate pair";
  } else {
    throw UnknownEntry("unknown gallery entry '" + name + "'");
  }
  return GalleryEntry{name, e.param, std::move(*e.problem), std::move(e.expected), e.notes};
}

}  // namespace degen
