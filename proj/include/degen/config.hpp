#pragma once

#include "degen/types.hpp"

#include <cstdint>
#include <string>

namespace degen {

/// Tolerances and budgets shared by every module. Defaults are the values
/// the library is calibrated against; a run may override them from a JSON
/// config file.
struct RunConfig {
  // operator core
  double solve_tol_per_dim = 1e-12;  // residual bound is solve_tol_per_dim * dim
  double range_tol = 1e-8;
  double max_condition = 1e13;
  int dense_threshold = 512;
  double power_iter_tol = 1e-12;
  int max_power_iters = 20000;

  // spectral certifier
  double beta_gap = 1e-3;
  double fit_tol = 0.1;

  // semigroup engine
  double trunc_tol = 1e-10;
  double quad_tol = 1e-7;
  int initial_nodes = 800;
  int node_budget = 12800;
  double eta_cut_cap = 1e6;

  // interpolation norms
  double xi_min = 1e-6;
  double xi_max = 1e8;
  int xi_nodes = 160;
  double tail_tol = 1e-4;

  // evolution solver
  double resid_tol = 1e-6;

  std::uint64_t seed = 20240611;
  NormKind norm = NormKind::L2;

  double solve_tol(int dim) const { return solve_tol_per_dim * dim; }
};

const RunConfig& default_config();

/// Reads a JSON object whose keys are a subset of the RunConfig fields.
RunConfig load_config(const std::string& path);

}  // namespace degen
