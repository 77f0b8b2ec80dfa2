#pragma once

#include "degen/evolution.hpp"

#include <optional>
#include <string>
#include <vector>

namespace degen {

struct ExpectedCertificate {
  double alpha = 1.0;
  double beta = 1.0;
  std::string provenance;
};

struct GalleryEntry {
  std::string name;
  int param = 0;  // N of the family; 2 for singular-mass-2
  ProblemInstance problem;
  std::optional<ExpectedCertificate> expected;
  std::string notes;
};

/// Builds a named test problem:
///   analytic-diag-N     M = I, L = diag(-1, ..., -N)
///   degenerate-heat-N   M = diag(x_i), x_i = i/(N+1), L = Dirichlet second difference / h^2
///   jordan-cascade-N    N upper-triangular 2x2 blocks with growing coupling
///   singular-mass-2     M = diag(1, 0), L = diag(-1, -2)
/// Each comes with polynomial forcing f(t) = (1+t) w and compatible u0, v0, g0.
/// Throws UnknownEntry for other names and InvalidArgument for N < 2.
GalleryEntry build_gallery(const std::string& name, const RunConfig& cfg = default_config());

/// One representative name per family.
std::vector<std::string> gallery_names();

}  // namespace degen
