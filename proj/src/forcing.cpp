#include "degen/forcing.hpp"

#include "degen/errors.hpp"

#include <algorithm>
#include <cmath>

namespace degen {

namespace {

void check_mu(double mu) {
  if (!(mu > 0.0 && mu <= 1.0)) throw InvalidArgument("Holder exponent mu must lie in (0,1]");
}

}  // namespace

Forcing Forcing::polynomial(std::vector<Vector> coeffs, double mu) {
  check_mu(mu);
  if (coeffs.empty()) throw InvalidArgument("polynomial forcing needs at least one coefficient");
  const auto dim = coeffs.front().size();
  for (const auto& c : coeffs)
    if (c.size() != dim || !c.allFinite()) throw InvalidArgument("bad polynomial coefficient");
  Forcing f;
  f.kind_ = Kind::Polynomial;
  f.dim_ = static_cast<int>(dim);
  f.mu_ = mu;
  f.degree_ = static_cast<int>(coeffs.size()) - 1;
  f.starts_ = {0.0};
  f.coeffs_ = {coeffs};
  f.raw_coeffs_ = std::move(coeffs);
  return f;
}

Forcing Forcing::samples(std::vector<double> times, std::vector<Vector> values, double mu) {
  check_mu(mu);
  if (times.size() < 2 || times.size() != values.size())
    throw InvalidArgument("sampled forcing needs >= 2 matching times and values");
  if (times.front() != 0.0) throw InvalidArgument("sampled forcing must start at t = 0");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw InvalidArgument("sample times must increase strictly");
  const auto dim = values.front().size();
  for (const auto& v : values)
    if (v.size() != dim || !v.allFinite()) throw InvalidArgument("bad sample value");
  Forcing f;
  f.kind_ = Kind::Samples;
  f.dim_ = static_cast<int>(dim);
  f.mu_ = mu;
  f.degree_ = 1;
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    f.starts_.push_back(times[i]);
    const Vector slope = (values[i + 1] - values[i]) / (times[i + 1] - times[i]);
    f.coeffs_.push_back({values[i], slope});
  }
  f.raw_times_ = std::move(times);
  f.raw_values_ = std::move(values);
  return f;
}

Forcing Forcing::zero(int dim) { return polynomial({Vector::Zero(dim)}, 1.0); }

int Forcing::piece_of(double t, bool left) const {
  int j = 0;
  for (int i = 1; i < piece_count(); ++i) {
    if (left ? starts_[i] < t : starts_[i] <= t) j = i;
    else break;
  }
  return j;
}

Vector Forcing::piece_derivative(int j, double t, int k) const {
  const auto& a = coeffs_.at(j);
  const double h = t - starts_[j];
  Vector out = Vector::Zero(dim_);
  // Horner on the k-th derivative of sum_i a_i h^i.
  for (int i = static_cast<int>(a.size()) - 1; i >= k; --i) {
    double falling = 1.0;
    for (int r = 0; r < k; ++r) falling *= i - r;
    out = out * h + falling * a[i];
  }
  return out;
}

Vector Forcing::derivative(double t, int k, bool left) const {
  if (k < 0) throw InvalidArgument("negative derivative order");
  return piece_derivative(piece_of(t, left), t, k);
}

}  // namespace degen
