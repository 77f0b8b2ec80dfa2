#pragma once

#include "degen/operator_core.hpp"
#include "degen/spectral_certifier.hpp"

#include <vector>

namespace degen {

enum class QuadratureRule { TrapezoidLogGraded, MidpointLogGraded, Uniform };

/// Truncated discretization of the path lambda(eta) = -c(|eta|+1)^alpha + i eta.
/// Nodes come in pairs +-eta; n_nodes counts both halves.
struct ContourSpec {
  double alpha = 1.0;
  double c = 1.0;
  double eta_cut = 1.0;
  int n_nodes = 800;
  /// eta scale where node spacing turns from geometric to uniform.
  double grading_scale = 1.0;
  QuadratureRule rule = QuadratureRule::TrapezoidLogGraded;

  Complex point(double eta) const;
  /// d lambda / d eta.
  Complex tangent(double eta) const;
};

/// One positive-side quadrature node; its mirror -eta carries the same weight.
struct ContourNode {
  double eta;
  double weight;
};

/// Nodes on (0, eta_cut] for n_half intervals per half, in increasing eta.
/// The trapezoid rule returns n_half + 1 nodes, the midpoint rules n_half.
std::vector<ContourNode> half_nodes(const ContourSpec& contour, int n_half);

/// Truncation point where |lambda|^n e^{t Re lambda} drops below trunc_tol.
/// Throws TruncationDominates when that point lies beyond eta_cut_cap.
double eta_cut_for(double alpha, double c, double t, int n, const RunConfig& cfg = default_config());

/// Contour sharing (alpha, c) with the certificate, truncated for (t, n).
ContourSpec contour_for(const SectorCertificate& cert, double t, int n,
                        const RunConfig& cfg = default_config());

struct PropagationResult {
  Vector value;
  double t = 0.0;
  int n = 0;
  double est_quad_error = 0.0;  // ||I(N) - I(N/2)|| at the accepted node count
  int nodes_used = 0;
};

/// A^n e^{tA} x by quadrature of the Dunford integral along the
/// contour, doubling the node count until the estimated error is below
/// quad_tol * max(||x||, ||result||) or the node budget is spent.
PropagationResult semigroup_apply(const OperatorPair& pair, const SectorCertificate& cert,
                                  const ContourSpec& contour, double t, int n, const Vector& x,
                                  const RunConfig& cfg = default_config());

/// As above with the contour derived from the certificate.
PropagationResult semigroup_apply(const OperatorPair& pair, const SectorCertificate& cert, double t,
                                  int n, const Vector& x, const RunConfig& cfg = default_config());

/// Column-wise semigroup_apply sharing pencil factorizations between columns.
/// Each column follows exactly the arithmetic of a single semigroup_apply.
std::vector<PropagationResult> semigroup_columns(const OperatorPair& pair,
                                                 const SectorCertificate& cert,
                                                 const ContourSpec& contour, double t, int n,
                                                 const Matrix& X,
                                                 const RunConfig& cfg = default_config());

/// Dense matrix of A^n e^{tA}.
Matrix semigroup_matrix(const OperatorPair& pair, const SectorCertificate& cert,
                        const ContourSpec& contour, double t, int n,
                        const RunConfig& cfg = default_config());
Matrix semigroup_matrix(const OperatorPair& pair, const SectorCertificate& cert, double t, int n,
                        const RunConfig& cfg = default_config());

}  // namespace degen
