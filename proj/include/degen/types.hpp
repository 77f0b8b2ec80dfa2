#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <functional>

namespace degen {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

/// Norm carried by the state space X.
enum class NormKind { L2, LInf };

inline double vector_norm(const Vector& x, NormKind kind = NormKind::L2) {
  if (kind == NormKind::LInf) return x.size() == 0 ? 0.0 : x.cwiseAbs().maxCoeff();
  return x.norm();
}

inline bool all_finite(const Vector& x) { return x.allFinite(); }

/// A linear map x -> y on C^dim, given as a callback.
using LinearMap = std::function<Vector(const Vector&)>;

}  // namespace degen
