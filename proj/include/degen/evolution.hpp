#pragma once

#include "degen/forcing.hpp"
#include "degen/interpolation.hpp"
#include "degen/operator_core.hpp"
#include "degen/spectral_certifier.hpp"

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace degen {

/// D_t(Mv) = Lv + f on [0, T] with Mv(0) = u0. The optional v0 and g0 carry
/// the compatibility data g0 = L v0 + f(0) in the range of M, with M v0 = u0,
/// needed for the derivative representation.
struct ProblemInstance {
  OperatorPair pair;
  Forcing f;
  Vector u0;
  double T = 1.0;
  std::optional<Vector> v0;
  std::optional<Vector> g0;

  /// Throws ValidationError naming the first invariant that fails.
  void validate(const RunConfig& cfg = default_config()) const;
  bool has_consistency() const noexcept { return v0.has_value() || g0.has_value(); }
  /// g0, derived from v0 when only v0 was given. Throws ConsistencyMissing.
  Vector consistency_g0() const;
};

/// [Q1 g](t) = int_0^t e^{(t-xi)A} g(xi) dxi for piecewise-polynomial g,
/// integrated exactly by parts: every term is a semigroup application to a
/// vector of the form A^{-(k+1)} g^{(k)}. `quad_error`, when given, receives
/// the summed quadrature estimates of those applications.
Vector q1_apply(const ProblemInstance& prob, const SectorCertificate& cert, double t,
                const RunConfig& cfg = default_config(), double* quad_error = nullptr);

/// [Q2 f](t) = e^{tA}[f(t) - f(0)].
Vector q2_apply(const ProblemInstance& prob, const SectorCertificate& cert, double t,
                const RunConfig& cfg = default_config(), double* quad_error = nullptr);

/// [Q3 f](t) = int_0^t A e^{(t-xi)A}[f(xi) - f(t)] dxi, evaluated as
/// e^{tA}[f(0) - f(t)] + [Q1 f'](t).
Vector q3_apply(const ProblemInstance& prob, const SectorCertificate& cert, double t,
                const RunConfig& cfg = default_config(), double* quad_error = nullptr);

struct SolutionTrace {
  std::vector<double> grid;
  std::vector<Vector> Mv;
  std::vector<Vector> DtMv;  // empty unless requested
  std::vector<double> quad_error;
  /// ||M v(t) - Mv(t)|| / max(1, ||Mv(t)||) for the recovered v(t).
  std::vector<double> residual;
  bool residual_ok = true;

  bool has_derivative() const noexcept { return !DtMv.empty(); }
};

/// Mv(t) = e^{tA}u0 + [Q1 f](t) on the grid and, when `with_derivative`,
/// DtMv(t) = e^{tA}g0 + [Q2 f](t) + [Q3 f](t). v(t) is recovered as
/// L^{-1}(DtMv(t) - f(t)) when the derivative is available and as the
/// minimum-norm M-preimage of Mv(t) otherwise.
SolutionTrace solve(const ProblemInstance& prob, const SectorCertificate& cert,
                    const std::vector<double>& grid, bool with_derivative,
                    const RunConfig& cfg = default_config());

/// ||M L^{-1}(Mv(t) - u0)|| at every grid point.
std::vector<double> initial_value_defect(const ProblemInstance& prob, const SolutionTrace& trace);

/// Measured constants that enter the ledger.
struct EmpiricalConstants {
  /// tilde_c[k] bounds ||A^k e^{tA}|| by tilde_c[k] t^{(beta-k-1)/alpha}.
  std::vector<double> tilde_c;
  /// Interpolation-inequality constant c(gamma, p).
  double c_gamma_p = 1.0;
};

/// Constants c1..c8 of the Holder estimates. An entry whose formula has a
/// nonpositive denominator is left empty and listed in `divergent`.
struct ConstantLedger {
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 0.5;
  double sigma = 0.5;
  double mu = 1.0;
  double T = 1.0;
  int n = 1;
  double C = 0.0;
  double C_prime = 0.0;
  std::array<std::optional<double>, 9> c{};  // c[1]..c[8]; c[0] unused
  std::vector<double> tilde_c;
  double c_gamma_p = 0.0;
  std::vector<std::string> divergent;

  /// c_k, throwing InadmissibleExponents when the entry diverged.
  double require(int k) const;
  /// "formula" for c1..c8 assembled from the measured inputs, "empirical"
  /// for tilde_c and c_gamma_p.
  static std::string_view provenance(std::string_view entry);
};

/// c1 = C + C' T^{gamma/alpha} maximized over orders 0..n, then c2..c8.
ConstantLedger constants_ledger(const SectorCertificate& cert, const InterpolationIndex& idx,
                                double T, double sigma, double mu, int n,
                                const EmpiricalConstants& empirical);

}  // namespace degen
