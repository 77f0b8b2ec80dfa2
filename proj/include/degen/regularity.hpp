#pragma once

#include "degen/evolution.hpp"
#include "degen/interpolation.hpp"
#include "degen/spectral_certifier.hpp"

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace degen {

using NormFn = std::function<double(const Vector&)>;

struct HolderReport {
  double delta = 0.5;
  double seminorm = 0.0;
  double sup_norm = 0.0;
  double total = 0.0;
  std::pair<double, double> argmax_pair{0.0, 0.0};
};

/// |f|_delta = max over grid pairs s < t of ||f(t) - f(s)|| / (t-s)^delta,
/// plus the sup norm. Ties keep the smallest s, then the smallest t.
HolderReport holder_seminorm(const std::vector<double>& times, const std::vector<Vector>& values,
                             double delta, const NormFn& norm);

struct RateFit {
  double exponent = 0.0;
  double prefactor = 0.0;
  double r2 = 0.0;
  double t_min = 0.0;
  double t_max = 0.0;
  int n = 0;
  /// Empty for the plain X norm.
  std::optional<InterpolationIndex> index;
  std::vector<double> times;
  std::vector<double> norms;

  /// (beta - n - 1 - gamma)/alpha, gamma = 0 for the plain norm.
  double predicted(const SectorCertificate& cert) const;
};

/// Least-squares fit of log ||A^n e^{tA}|| against log t on n_points
/// log-spaced times in [t_min, t_max]; the norm is the plain operator norm
/// or the surrogate operator norm into X_A^{gamma,p}.
RateFit blowup_fit(const OperatorPair& pair, const SectorCertificate& cert, int n,
                   const std::optional<InterpolationIndex>& idx, double t_min, double t_max,
                   int n_points, const RunConfig& cfg = default_config());

/// Smallest margin of c1 t^{(beta-n-1-gamma)/alpha} - norm over the fitted points.
double blowup_bound_margin(const RateFit& fit, const SectorCertificate& cert, double c1);

struct GapRow {
  double s = 0.0;
  double t = 0.0;
  double gap = 0.0;
  double bound = 0.0;
  double margin = 0.0;
};

struct GapReport {
  std::vector<GapRow> rows;
  bool holds = true;
};

/// ||A^n e^{tA} - A^n e^{sA}|| (plain or surrogate operator norm) against
/// sigma^{-1} c1 s^{(alpha+beta-n-2-gamma-alpha sigma)/alpha} (t-s)^sigma for
/// every s in s_grid and t in t_grid with s < t.
GapReport holder_of_semigroup_gap(const OperatorPair& pair, const SectorCertificate& cert, int n,
                                  const std::optional<InterpolationIndex>& idx, double sigma,
                                  double c1, const std::vector<double>& s_grid,
                                  const std::vector<double>& t_grid,
                                  const RunConfig& cfg = default_config());

enum class Regime { Lem41, Lem42, Lem43, Lem44, Lem45, Thm51, Thm53, Thm54 };

std::string regime_name(Regime r);
/// Accepts the names printed by regime_name ("Lem4.1", ..., "Thm5.4").
Regime parse_regime(const std::string& name);
const std::vector<Regime>& all_regimes();

struct GateMargin {
  std::string name;
  double slack = 0.0;
  /// Closed inequalities accept zero slack.
  bool closed = false;
  bool ok() const noexcept { return closed ? slack >= 0.0 : slack > 0.0; }
};

struct ExponentGate {
  Regime regime = Regime::Lem41;
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 0.5;
  double sigma = 0.5;
  double mu = 1.0;
  bool admissible = false;
  std::vector<GateMargin> margins;
  /// Upper end of the admissible sigma interval for the given gamma and mu.
  double sigma_sup = 0.0;
  /// Exponent of T in the regime's estimate; zero where the estimate has none.
  double nu = 0.0;
};

/// Admissibility of (alpha, beta, gamma, sigma, mu) for a regime. Each
/// inequality is stored in multiplied-out form, so slacks are affine or
/// bilinear in the parameters.
ExponentGate gate(Regime regime, double alpha, double beta, double gamma, double sigma,
                  double mu);

/// Gate for gamma at the middle of its admissible interval and sigma at half
/// of the resulting sigma interval (capped at 1/2). Inadmissible when the
/// gamma interval is empty.
ExponentGate suggest_exponents(Regime regime, double alpha, double beta, double mu);

/// tilde_c[k] = max over log-spaced t in [t_min, t_max] of
/// t^{(k+1-beta)/alpha} ||A^k e^{tA}||, k = 0..k_max.
std::vector<double> estimate_tilde_c(const OperatorPair& pair, const SectorCertificate& cert,
                                     int k_max, double t_min, double t_max, int n_points,
                                     const RunConfig& cfg = default_config());

/// max of ||y||_{gamma,p} / (||y||^{1-gamma} ||y||_{D(A)}^gamma) over
/// 2*dim seeded vectors M w and the members of `extra` that lie in D(A).
double estimate_c_gamma_p(const OperatorPair& pair, const InterpolationIndex& idx,
                          const std::vector<Vector>& extra = {},
                          const RunConfig& cfg = default_config());

/// Outcome of confronting one estimate with measured data.
struct Verdict {
  Regime regime = Regime::Lem41;
  std::string quantity;
  double measured = 0.0;
  double bound = 0.0;
  double margin = 0.0;
  bool pass = false;
  ExponentGate gate;
  ConstantLedger ledger;
  HolderReport holder;
  int grid_points = 0;
};

/// End-to-end check of one regime's estimate: the designated quantity
/// (Q1 f, Q2 f, Q3 f, Mv or DtMv) is evaluated on the grid, its Holder norm is measured in the surrogate norm and compared
/// with the right-hand side assembled from the constant ledger. Throws
/// GateRejected when the exponents are inadmissible.
Verdict theorem_harness(const ProblemInstance& prob, const SectorCertificate& cert, Regime regime,
                        const InterpolationIndex& idx, double sigma,
                        const std::vector<double>& grid, const RunConfig& cfg = default_config());

/// Empirical inputs to the ledger for a problem: tilde_c[0..2] over
/// [1e-3, max(1, T)] and c(gamma, p) including the supplied vectors.
EmpiricalConstants estimate_empirical_constants(const OperatorPair& pair,
                                                const SectorCertificate& cert,
                                                const InterpolationIndex& idx, double T,
                                                const std::vector<Vector>& extra,
                                                const RunConfig& cfg = default_config());

}  // namespace degen
