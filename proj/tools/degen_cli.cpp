// Command-line front end: certify | propagate | norm | solve | rates | holder | verify | gallery.
// Exit codes: 0 all checks passed, 1 a check failed or a computation aborted,
// 2 usage or input error.

#include "degen/gallery.hpp"
#include "degen/problem_io.hpp"
#include "degen/random.hpp"
#include "degen/regularity.hpp"
#include "degen/report.hpp"
#include "degen/semigroup.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace degen;

namespace {

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
};

struct Source {
  std::string problem;
  std::string gallery;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

RunConfig make_config(const Globals& g) {
  RunConfig cfg = g.config.empty() ? RunConfig{} : load_config(g.config);
  if (g.seed) cfg.seed = *g.seed;
  return cfg;
}

ProblemInstance load_source(const Source& s, const RunConfig& cfg, const char* fallback) {
  if (!s.problem.empty() && !s.gallery.empty())
    throw UsageError("give either --problem or --gallery, not both");
  if (!s.problem.empty()) return load_problem(s.problem, cfg);
  return build_gallery(s.gallery.empty() ? fallback : s.gallery, cfg).problem;
}

void add_source(CLI::App* sub, Source& s) {
  sub->add_option("--problem", s.problem, "problem file (JSON)");
  sub->add_option("--gallery", s.gallery, "built-in problem name, e.g. degenerate-heat-16");
}

double parse_p(const std::string& text) {
  if (text == "inf" || text == "infinity") return InterpolationIndex::inf;
  try {
    std::size_t used = 0;
    const double p = std::stod(text, &used);
    if (used == text.size()) return p;
  } catch (const std::exception&) {
  }
  throw UsageError("--p expects a number >= 1 or 'inf'");
}

std::string p_text(double p) { return std::isinf(p) ? "inf" : format_real(p); }

Vector read_vector_file(const std::string& path, int dim) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, "cannot open vector file");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path, e.what());
  }
  if (!j.is_array() || static_cast<int>(j.size()) != dim)
    throw ParseError(path, "expected " + std::to_string(dim) + " [re, im] pairs");
  Vector v(dim);
  for (int i = 0; i < dim; ++i) {
    const auto& e = j[i];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
      throw ParseError(path + "[" + std::to_string(i) + "]", "expected a [re, im] pair");
    v(i) = Complex(e[0].get<double>(), e[1].get<double>());
  }
  return v;
}

std::string vector_line(const std::string& label, const Vector& v) {
  std::string s = label;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    s += " " + format_real(v(i).real()) + " " + format_real(v(i).imag());
  return s + "\n";
}

class Output {
 public:
  explicit Output(const std::string& dir) : dir_(dir) { std::filesystem::create_directories(dir_); }
  void write(const std::string& name, const std::string& text, bool echo) const {
    save_report((dir_ / name).string(), text);
    if (echo) std::cout << text;
  }

 private:
  std::filesystem::path dir_;
};

SectorCertificate certify_default(const OperatorPair& pair, const RunConfig& cfg) {
  return certify(pair, RegionProbePlan{}, default_alpha_grid(), default_c_grid(), cfg);
}

Record certificate_record(const SectorCertificate& c) {
  Record r;
  r.add("alpha", c.alpha).add("beta", c.beta).add("c", c.c).add("C", c.C);
  r.add("samples", static_cast<int>(c.samples.size())).add("residual", c.residual);
  return r;
}

std::vector<double> parse_grid(const std::string& spec, double T) {
  std::vector<double> g;
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  try {
    if (kind == "uniform" && colon != std::string::npos) {
      const int n = std::stoi(spec.substr(colon + 1));
      if (n < 2) throw UsageError("uniform grid needs N >= 2");
      for (int i = 0; i <= n; ++i) g.push_back(i == n ? T : T * i / n);
      return g;
    }
    if (kind == "log" && colon != std::string::npos) {
      const auto c2 = spec.find(':', colon + 1);
      if (c2 == std::string::npos) throw UsageError("log grid is log:TMIN:N");
      const double tmin = std::stod(spec.substr(colon + 1, c2 - colon - 1));
      const int n = std::stoi(spec.substr(c2 + 1));
      if (!(tmin > 0.0 && tmin < T) || n < 2) throw UsageError("log grid needs 0 < TMIN < T, N >= 2");
      g.push_back(0.0);
      for (int i = 0; i < n; ++i)
        g.push_back(i == n - 1 ? T : tmin * std::pow(T / tmin, double(i) / (n - 1)));
      return g;
    }
  } catch (const std::logic_error&) {
  }
  throw UsageError("grid must be uniform:N or log:TMIN:N");
}

std::vector<double> uniform_grid(double T, int n) {
  std::vector<double> g;
  for (int i = 0; i <= n; ++i) g.push_back(i == n ? T : T * i / n);
  return g;
}

// ---------------------------------------------------------------- commands

int cmd_certify(const Globals& G, const Source& S) {
  const RunConfig cfg = make_config(G);
  const ProblemInstance prob = load_source(S, cfg, "degenerate-heat-16");
  const SectorCertificate cert = certify_default(prob.pair, cfg);
  const Output out(G.out_dir);
  out.write("certificate.txt", certificate_record(cert).str(), true);
  CsvTable t({"re_lambda", "im_lambda", "norm"});
  for (const auto& s : cert.samples) t.row().cell(s.lambda.real()).cell(s.lambda.imag()).cell(s.norm);
  out.write("resolvent.csv", t.str(), false);
  return 0;
}

int cmd_propagate(const Globals& G, const Source& S, double t, int n, const std::string& xfile) {
  const RunConfig cfg = make_config(G);
  const ProblemInstance prob = load_source(S, cfg, "degenerate-heat-16");
  const Vector x = xfile.empty() ? prob.u0 : read_vector_file(xfile, prob.pair.dim());
  const SectorCertificate cert = certify_default(prob.pair, cfg);
  const auto r = semigroup_apply(prob.pair, cert, t, n, x, cfg);
  CsvTable tab({"t", "n", "norm", "est_quad_error", "nodes_used"});
  tab.row().cell(t).cell(n).cell(prob.pair.norm_of(r.value)).cell(r.est_quad_error).cell(r.nodes_used);
  const Output out(G.out_dir);
  out.write("propagate.csv", tab.str(), true);
  out.write("propagate_vector.txt", vector_line("value", r.value), false);
  return 0;
}

int cmd_norm(const Globals& G, const Source& S, double gamma, const std::string& p,
             const std::string& xfile) {
  const RunConfig cfg = make_config(G);
  const ProblemInstance prob = load_source(S, cfg, "degenerate-heat-16");
  const Vector x = xfile.empty() ? prob.u0 : read_vector_file(xfile, prob.pair.dim());
  const InterpolationIndex idx{gamma, parse_p(p)};
  const auto r = interp_norm(prob.pair, idx, x, cfg);
  CsvTable tab({"gamma", "p", "x_norm", "seminorm", "total", "xi_min", "xi_max", "tail_estimate",
                "converged"});
  tab.row().cell(gamma).cell(p_text(idx.p)).cell(r.x_norm).cell(r.seminorm).cell(r.total);
  tab.cell(r.xi_min).cell(r.xi_max).cell(r.tail_estimate).cell(r.converged ? 1 : 0);
  Output(G.out_dir).write("norm.csv", tab.str(), true);
  return 0;
}

int cmd_solve(const Globals& G, const Source& S, const std::string& grid_spec, bool deriv) {
  const RunConfig cfg = make_config(G);
  const ProblemInstance prob = load_source(S, cfg, "degenerate-heat-16");
  const auto grid = parse_grid(grid_spec, prob.T);
  const SectorCertificate cert = certify_default(prob.pair, cfg);
  const SolutionTrace tr = solve(prob, cert, grid, deriv, cfg);
  CsvTable tab({"t", "norm_Mv", "norm_DtMv", "residual", "quad_error"});
  std::string vec;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    tab.row().cell(grid[i]).cell(prob.pair.norm_of(tr.Mv[i]));
    tab.cell(deriv ? prob.pair.norm_of(tr.DtMv[i]) : std::nan("")).cell(tr.residual[i]);
    tab.cell(tr.quad_error[i]);
    vec += "t " + format_real(grid[i]) + "\n" + vector_line("Mv", tr.Mv[i]);
    if (deriv) vec += vector_line("DtMv", tr.DtMv[i]);
  }
  const Output out(G.out_dir);
  out.write("solve.csv", tab.str(), true);
  out.write("solve_vectors.txt", vec, false);
  return tr.residual_ok ? 0 : 1;
}

int cmd_rates(const Globals& G, const Source& S, int n, std::optional<double> gamma,
              const std::string& p, double t_min, double t_max, int points) {
  const RunConfig cfg = make_config(G);
  const ProblemInstance prob = load_source(S, cfg, "jordan-cascade-32");
  const SectorCertificate cert = certify_default(prob.pair, cfg);
  std::optional<InterpolationIndex> idx;
  if (gamma) idx = InterpolationIndex{*gamma, parse_p(p)};
  const RateFit fit = blowup_fit(prob.pair, cert, n, idx, t_min, t_max, points, cfg);
  double c1;
  const auto tc = estimate_tilde_c(prob.pair, cert, n + 1, 1e-3, std::max(1.0, t_max), 13, cfg);
  if (idx) {
    EmpiricalConstants emp{tc, 0.0};
    std::vector<Vector> extra;
    for (double t : fit.times) extra.push_back(semigroup_apply(prob.pair, cert, t, n, prob.u0, cfg).value);
    emp.c_gamma_p = estimate_c_gamma_p(prob.pair, *idx, extra, cfg);
    c1 = constants_ledger(cert, *idx, t_max, 0.5, 1.0, n, emp).require(1);
  } else {
    c1 = tc[n];
  }
  const double e = fit.predicted(cert);
  CsvTable tab({"t", "norm", "bound"});
  for (std::size_t i = 0; i < fit.times.size(); ++i)
    tab.row().cell(fit.times[i]).cell(fit.norms[i]).cell(c1 * std::pow(fit.times[i], e));
  const double margin = blowup_bound_margin(fit, cert, c1);
  Record rec;
  rec.add("n", n).add("norm", idx ? "interpolation gamma=" + format_real(idx->gamma) + " p=" + p_text(idx->p) : "plain");
  rec.add("exponent", fit.exponent).add("predicted", e).add("r2", fit.r2).add("prefactor", fit.prefactor);
  rec.add("c1", c1).add("min_margin", margin).add("pass", margin >= 0.0 ? "yes" : "no");
  const Output out(G.out_dir);
  out.write("rates.csv", tab.str(), true);
  out.write("rates_summary.txt", rec.str(), true);
  return margin >= 0.0 ? 0 : 1;
}

void verdict_row(CsvTable& tab, const std::string& check, const Verdict& v) {
  tab.row().cell(check).cell(v.measured).cell(v.bound).cell(v.margin).cell(v.pass ? 1 : 0);
}

Record ledger_record(const Verdict& v) {
  Record r;
  r.add("regime", regime_name(v.regime)).add("quantity", v.quantity);
  r.add("gamma", v.gate.gamma).add("sigma", v.gate.sigma).add("mu", v.gate.mu).add("nu", v.gate.nu);
  r.add("measured", v.measured).add("bound", v.bound).add("margin", v.margin);
  r.add("argmax_s", v.holder.argmax_pair.first).add("argmax_t", v.holder.argmax_pair.second);
  for (int k = 1; k <= 8; ++k) {
    const auto& c = v.ledger.c[k];
    r.add("c" + std::to_string(k) + " [formula]", c ? format_real(*c) : std::string("divergent"));
  }
  for (std::size_t k = 0; k < v.ledger.tilde_c.size(); ++k)
    r.add("tilde_c" + std::to_string(k) + " [empirical]", v.ledger.tilde_c[k]);
  r.add("c_gamma_p [empirical]", v.ledger.c_gamma_p);
  r.add("norm convention", "surrogate X_A^{gamma,p}");
  return r;
}

int cmd_holder(const Globals& G, const Source& S, const std::string& regime_text,
               std::optional<double> gamma, std::optional<double> sigma, const std::string& p,
               int points) {
  const RunConfig cfg = make_config(G);
  const ProblemInstance prob = load_source(S, cfg, "degenerate-heat-16");
  const Regime regime = parse_regime(regime_text);
  const SectorCertificate cert = certify_default(prob.pair, cfg);
  const ExponentGate sug = suggest_exponents(regime, cert.alpha, cert.beta, prob.f.mu());
  const double g = gamma.value_or(sug.gamma);
  const double s = sigma.value_or(sug.sigma);
  const Verdict v = theorem_harness(prob, cert, regime, {g, parse_p(p)}, s,
                                    uniform_grid(prob.T, points), cfg);
  CsvTable tab({"check", "measured", "bound", "margin", "pass"});
  verdict_row(tab, regime_name(regime) + " " + v.quantity, v);
  const Output out(G.out_dir);
  out.write("holder.csv", tab.str(), true);
  out.write("holder_ledger.txt", ledger_record(v).str(), false);
  return v.pass ? 0 : 1;
}

int cmd_verify(const Globals& G, const Source& S) {
  const RunConfig cfg = make_config(G);
  const ProblemInstance prob = load_source(S, cfg, "degenerate-heat-16");
  const SectorCertificate cert = certify_default(prob.pair, cfg);
  CsvTable tab({"check", "measured", "bound", "margin", "pass"});
  bool all = true;

  // Semigroup law on a seeded vector.
  Rng rng(cfg.seed);
  const Vector x = random_vector(prob.pair.dim(), rng, prob.pair.is_real());
  double worst = 0.0;
  for (double t : {0.05, 0.2})
    for (double s : {0.05, 0.3}) {
      const Vector lhs = semigroup_apply(prob.pair, cert, t + s, 0, x, cfg).value;
      const Vector es = semigroup_apply(prob.pair, cert, s, 0, x, cfg).value;
      const Vector rhs = semigroup_apply(prob.pair, cert, t, 0, es, cfg).value;
      worst = std::max(worst, prob.pair.norm_of(lhs - rhs) / prob.pair.norm_of(x));
    }
  tab.row().cell("semigroup law").cell(worst).cell(1e-6).cell(1e-6 - worst).cell(worst <= 1e-6 ? 1 : 0);
  all = all && worst <= 1e-6;

  // Solution residual.
  const auto grid = uniform_grid(prob.T, 8);
  if (prob.has_consistency()) {
    const SolutionTrace tr = solve(prob, cert, grid, true, cfg);
    const double r = *std::max_element(tr.residual.begin(), tr.residual.end());
    tab.row().cell("equation residual").cell(r).cell(cfg.resid_tol).cell(cfg.resid_tol - r);
    tab.cell(tr.residual_ok ? 1 : 0);
    all = all && tr.residual_ok;
  }

  for (Regime regime : {Regime::Thm51, Regime::Thm54}) {
    if (regime == Regime::Thm54 && !prob.has_consistency()) continue;
    const ExponentGate sug = suggest_exponents(regime, cert.alpha, cert.beta, prob.f.mu());
    if (!sug.admissible) {
      tab.row().cell(regime_name(regime) + " gate").cell(0.0).cell(0.0).cell(0.0).cell(0);
      all = false;
      continue;
    }
    const Verdict v = theorem_harness(prob, cert, regime, {sug.gamma, InterpolationIndex::inf},
                                      sug.sigma, grid, cfg);
    verdict_row(tab, regime_name(regime) + " " + v.quantity, v);
    all = all && v.pass;
  }
  Record rec = certificate_record(cert);
  rec.add("seed", std::to_string(cfg.seed)).add("result", all ? "pass" : "fail");
  const Output out(G.out_dir);
  out.write("verify.csv", tab.str(), true);
  out.write("verify_summary.txt", rec.str(), true);
  return all ? 0 : 1;
}

int cmd_gallery(const Globals& G, const std::string& name, const std::string& save) {
  const RunConfig cfg = make_config(G);
  CsvTable tab({"name", "dim", "expected_alpha", "expected_beta", "provenance", "notes"});
  const std::vector<std::string> names = name.empty() ? gallery_names() : std::vector{name};
  for (const auto& nm : names) {
    const GalleryEntry e = build_gallery(nm, cfg);
    tab.row().cell(e.name).cell(e.problem.pair.dim());
    if (e.expected) tab.cell(e.expected->alpha).cell(e.expected->beta).cell(e.expected->provenance);
    else tab.cell("").cell("").cell("");
    tab.cell(e.notes);
    if (!save.empty()) save_problem(save, e.problem);
  }
  Output(G.out_dir).write("gallery.csv", tab.str(), true);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Degenerate evolution equations: resolvent certificates, semigroups, regularity checks"};
  app.require_subcommand(1);
  Globals G;
  std::uint64_t seed = 0;
  app.add_option("--config", G.config, "run configuration (JSON)");
  auto* seed_opt = app.add_option("--seed", seed, "random seed");
  app.add_option("--out-dir", G.out_dir, "directory for CSV and record files");

  Source S;
  int code = 0;
  std::function<int()> run;

  auto* certify_cmd = app.add_subcommand("certify", "fit a sector resolvent certificate");
  add_source(certify_cmd, S);
  certify_cmd->callback([&] { run = [&] { return cmd_certify(G, S); }; });

  double t = 0.1;
  int n = 0;
  std::string xfile;
  auto* prop = app.add_subcommand("propagate", "apply A^n e^{tA} to a vector");
  add_source(prop, S);
  prop->add_option("--t", t, "time")->required();
  prop->add_option("--n", n, "power of A")->check(CLI::NonNegativeNumber);
  prop->add_option("--x-file", xfile, "vector file (JSON list of [re, im]); default u0");
  prop->callback([&] { run = [&] { return cmd_propagate(G, S, t, n, xfile); }; });

  double gamma_v = 0.5;
  std::string p = "2";
  auto* norm = app.add_subcommand("norm", "interpolation norm of a vector");
  add_source(norm, S);
  norm->add_option("--gamma", gamma_v, "gamma in (0,1)")->required();
  norm->add_option("--p", p, "p >= 1 or inf");
  norm->add_option("--x-file", xfile, "vector file; default u0");
  norm->callback([&] { run = [&] { return cmd_norm(G, S, gamma_v, p, xfile); }; });

  std::string grid = "uniform:16";
  bool deriv = false;
  auto* solve_cmd = app.add_subcommand("solve", "strict solution on a time grid");
  add_source(solve_cmd, S);
  solve_cmd->add_option("--grid", grid, "uniform:N or log:TMIN:N");
  solve_cmd->add_flag("--with-derivative", deriv, "also evaluate D_t(Mv)");
  solve_cmd->callback([&] { run = [&] { return cmd_solve(G, S, grid, deriv); }; });

  double t_min = 1e-2, t_max = 1.0;
  int points = 9;
  std::optional<double> gamma_opt, sigma_opt;
  auto* rates = app.add_subcommand("rates", "blow-up exponent of A^n e^{tA} as t -> 0");
  add_source(rates, S);
  rates->add_option("--n", n, "power of A")->check(CLI::NonNegativeNumber);
  rates->add_option("--gamma", gamma_opt, "interpolation gamma; plain norm when absent");
  rates->add_option("--p", p, "p >= 1 or inf");
  rates->add_option("--t-min", t_min);
  rates->add_option("--t-max", t_max);
  rates->add_option("--points", points, "number of fit points (>= 8)");
  rates->callback([&] { run = [&] { return cmd_rates(G, S, n, gamma_opt, p, t_min, t_max, points); }; });

  std::string regime;
  int grid_points = 8;
  auto* holder = app.add_subcommand("holder", "Holder estimate of a lemma or theorem regime");
  add_source(holder, S);
  holder->add_option("--regime", regime, "Lem4.1 .. Lem4.5, Thm5.1, Thm5.3, Thm5.4")->required();
  holder->add_option("--gamma", gamma_opt, "default: middle of the admissible interval");
  holder->add_option("--sigma", sigma_opt, "default: half of the admissible interval");
  holder->add_option("--p", p, "p >= 1 or inf");
  holder->add_option("--points", grid_points, "uniform grid intervals on [0, T]");
  holder->callback([&] {
    run = [&] { return cmd_holder(G, S, regime, gamma_opt, sigma_opt, p, grid_points); };
  });

  auto* verify = app.add_subcommand("verify", "run the check suite on one problem");
  add_source(verify, S);
  verify->callback([&] { run = [&] { return cmd_verify(G, S); }; });

  std::string name, save;
  auto* gal = app.add_subcommand("gallery", "list or export built-in problems");
  gal->add_option("--name", name, "entry name; all families when absent");
  gal->add_option("--save", save, "write the entry as a problem file");
  gal->callback([&] { run = [&] { return cmd_gallery(G, name, save); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  if (seed_opt->count() > 0) G.seed = seed;
  try {
    code = run();
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const UnknownEntry& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const InvalidArgument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "check failed: " << e.what() << "\n";
    return 1;
  }
  return code;
}
