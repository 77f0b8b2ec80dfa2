#pragma once

#include "degen/operator_core.hpp"

#include <span>
#include <string>
#include <vector>

namespace degen {

struct ResolventSample {
  Complex lambda;
  double norm = 0.0;  // ||M (lambda M - L)^{-1}||
};

/// Where the resolvent is probed. Boundary points follow the curve
/// Re(lambda) = -c(|Im lambda| + 1)^alpha; interior points fill the imaginary
/// axis, intermediate curves between it and the boundary, and three rays into
/// the right half-plane.
struct RegionProbePlan {
  double eta_max = 1e3;
  int n_boundary = 64;
  int n_interior = 48;
  int radial_levels = 3;
  /// The spectrum must avoid the widened region with c scaled by this factor.
  double c_safety = 2.0;
};

/// Fitted constants of the sector bound ||M(lambda M - L)^{-1}|| <= C(|lambda|+1)^{-beta}
/// on Re(lambda) >= -c(|Im lambda|+1)^alpha.
struct SectorCertificate {
  double alpha = 1.0;
  double beta = 1.0;
  double c = 1.0;
  double C = 1.0;
  std::vector<ResolventSample> samples;
  double residual = 0.0;

  /// Throws ValidationError unless 0 < beta < alpha <= 1 and c, C > 0.
  void validate() const;
  /// Bound value C(|lambda|+1)^{-beta}.
  double bound(Complex lambda) const;
  /// True when lambda lies in the certified region.
  bool contains(Complex lambda) const;
};

/// Result of probing one candidate region.
struct RegionProbe {
  double alpha = 1.0;
  double c = 1.0;
  bool ok = false;
  std::string failure;
  std::vector<ResolventSample> samples;
};

/// The grid of probe points for a region, in a fixed order.
std::vector<Complex> probe_points(const RegionProbePlan& plan, double alpha, double c);

/// Resolvent norms on the probe grid. Pencil failures propagate.
std::vector<ResolventSample> probe_resolvent_norms(const OperatorPair& pair,
                                                   const RegionProbePlan& plan, double alpha,
                                                   double c,
                                                   const RunConfig& cfg = default_config());

/// Number of zeros of det(lambda M - L) inside the region truncated to
/// |Im lambda| <= eta_max and Re lambda <= eta_max, counted by the argument
/// principle along its boundary. Pencil failures on the path propagate.
int count_pencil_eigenvalues(const OperatorPair& pair, double alpha, double c, double eta_max,
                             const RunConfig& cfg = default_config());

/// Fits beta by least squares of log(norm) against log(|lambda|+1) over the
/// imaginary-axis samples, clamps it below alpha, and takes C as the largest
/// ratio norm * (|lambda|+1)^beta over all samples.
SectorCertificate fit_certificate(const std::vector<ResolventSample>& samples, double alpha,
                                  double c, const RunConfig& cfg = default_config());

/// Picks the largest successful region (maximize alpha, then c) and fits it.
SectorCertificate fit_certificate(std::span<const RegionProbe> probes,
                                  const RunConfig& cfg = default_config());

/// Probes every (alpha, c) of the grids, in lexicographic order, until the
/// first region that excludes the spectrum and whose probes all succeed.
/// Every attempt is appended to `attempts` when given.
SectorCertificate certify(const OperatorPair& pair, const RegionProbePlan& plan,
                          std::vector<double> alpha_grid, std::vector<double> c_grid,
                          const RunConfig& cfg = default_config(),
                          std::vector<RegionProbe>* attempts = nullptr);

const std::vector<double>& default_alpha_grid();
const std::vector<double>& default_c_grid();

/// Largest relative violation of the certificate's bound over `samples`
/// that lie in its region.
double revalidate(const SectorCertificate& cert, const std::vector<ResolventSample>& samples);

}  // namespace degen
