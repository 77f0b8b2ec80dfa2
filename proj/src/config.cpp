#include "degen/config.hpp"

#include "degen/errors.hpp"

#include <json.hpp>

#include <fstream>

namespace degen {

const RunConfig& default_config() {
  static const RunConfig cfg{};
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, "cannot open config file");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ":byte " + std::to_string(e.byte), e.what());
  }
  if (!j.is_object()) throw ParseError(path, "config must be a JSON object");

  RunConfig cfg;
  auto take = [&](const char* key, auto& field) {
    if (!j.contains(key)) return;
    try {
      j.at(key).get_to(field);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(path + ":" + key, e.what());
    }
  };
  take("solve_tol_per_dim", cfg.solve_tol_per_dim);
  take("range_tol", cfg.range_tol);
  take("max_condition", cfg.max_condition);
  take("dense_threshold", cfg.dense_threshold);
  take("power_iter_tol", cfg.power_iter_tol);
  take("max_power_iters", cfg.max_power_iters);
  take("beta_gap", cfg.beta_gap);
  take("fit_tol", cfg.fit_tol);
  take("trunc_tol", cfg.trunc_tol);
  take("quad_tol", cfg.quad_tol);
  take("initial_nodes", cfg.initial_nodes);
  take("node_budget", cfg.node_budget);
  take("eta_cut_cap", cfg.eta_cut_cap);
  take("xi_min", cfg.xi_min);
  take("xi_max", cfg.xi_max);
  take("xi_nodes", cfg.xi_nodes);
  take("tail_tol", cfg.tail_tol);
  take("resid_tol", cfg.resid_tol);
  take("seed", cfg.seed);
  if (j.contains("norm")) {
    const std::string n = j.at("norm").get<std::string>();
    if (n == "l2") cfg.norm = NormKind::L2;
    else if (n == "linf") cfg.norm = NormKind::LInf;
    else throw ParseError(path + ":norm", "expected \"l2\" or \"linf\"");
  }

  const double tols[] = {cfg.solve_tol_per_dim, cfg.range_tol, cfg.trunc_tol, cfg.quad_tol,
                         cfg.fit_tol,           cfg.tail_tol,  cfg.resid_tol, cfg.beta_gap};
  for (double t : tols)
    if (!(t > 0.0)) throw ValidationError("config: all tolerances must be positive");
  if (cfg.initial_nodes <= 0 || cfg.initial_nodes % 4 != 0 || cfg.node_budget < cfg.initial_nodes)
    throw ValidationError("config: initial_nodes must be a positive multiple of 4 within node_budget");
  if (cfg.xi_nodes < 8 || !(cfg.xi_min > 0.0 && cfg.xi_max > cfg.xi_min))
    throw ValidationError("config: invalid xi window");
  return cfg;
}

}  // namespace degen
