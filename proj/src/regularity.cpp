#include "degen/regularity.hpp"

#include "degen/random.hpp"
#include "degen/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace degen {

namespace {

std::vector<double> logspace(double a, double b, int n) {
  std::vector<double> out(n);
  const double la = std::log(a), lb = std::log(b);
  for (int i = 0; i < n; ++i) out[i] = n == 1 ? a : std::exp(la + (lb - la) * i / (n - 1));
  if (n > 1) out.back() = b;
  return out;
}

double op_norm(const OperatorPair& pair, const std::optional<InterpolationIndex>& idx,
               const Matrix& B, const RunConfig& cfg) {
  if (idx) return interp_operator_norm(pair, *idx, B, cfg);
  return operator_norm(B, pair.norm(), cfg);
}

}  // namespace

HolderReport holder_seminorm(const std::vector<double>& times, const std::vector<Vector>& values,
                             double delta, const NormFn& norm) {
  if (!(delta > 0.0 && delta < 1.0) && delta != 1.0)
    throw InvalidArgument("delta must lie in (0,1]");
  if (times.size() != values.size()) throw InvalidArgument("times and values differ in length");
  if (times.size() < 3) throw DegenerateGrid("Holder seminorm needs at least 3 grid points");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw DegenerateGrid("grid times must increase strictly");

  HolderReport r;
  r.delta = delta;
  r.argmax_pair = {times[0], times[1]};
  for (const auto& v : values) r.sup_norm = std::max(r.sup_norm, norm(v));
  bool found = false;
  for (std::size_t i = 0; i < times.size(); ++i) {
    for (std::size_t j = i + 1; j < times.size(); ++j) {
      const double q = norm(values[j] - values[i]) / std::pow(times[j] - times[i], delta);
      if (!found || q > r.seminorm) {
        r.seminorm = q;
        r.argmax_pair = {times[i], times[j]};
        found = true;
      }
    }
  }
  r.total = r.sup_norm + r.seminorm;
  return r;
}

double RateFit::predicted(const SectorCertificate& cert) const {
  const double g = index ? index->gamma : 0.0;
  return (cert.beta - n - 1.0 - g) / cert.alpha;
}

RateFit blowup_fit(const OperatorPair& pair, const SectorCertificate& cert, int n,
                   const std::optional<InterpolationIndex>& idx, double t_min, double t_max,
                   int n_points, const RunConfig& cfg) {
  if (!(t_min > 0.0 && t_max > t_min)) throw InvalidArgument("bad fit window");
  if (n_points < 8) throw InvalidArgument("rate fits need at least 8 points");
  if (n < 0) throw InvalidArgument("negative power");
  RateFit fit;
  fit.n = n;
  fit.index = idx;
  fit.t_min = t_min;
  fit.t_max = t_max;
  fit.times = logspace(t_min, t_max, n_points);
  for (double t : fit.times) {
    const double v = op_norm(pair, idx, semigroup_matrix(pair, cert, t, n, cfg), cfg);
    if (!std::isfinite(v)) throw Diverged("nonfinite norm in rate fit");
    fit.norms.push_back(v);
  }
  Eigen::VectorXd x(n_points), y(n_points);
  for (int i = 0; i < n_points; ++i) {
    x(i) = std::log(fit.times[i]);
    y(i) = std::log(std::max(fit.norms[i], 1e-300));
  }
  const double mx = x.mean(), my = y.mean();
  const double sxx = (x.array() - mx).square().sum();
  const double sxy = ((x.array() - mx) * (y.array() - my)).sum();
  fit.exponent = sxy / sxx;
  const double icpt = my - fit.exponent * mx;
  fit.prefactor = std::exp(icpt);
  const double ss_tot = (y.array() - my).square().sum();
  const double ss_res = (y.array() - icpt - fit.exponent * x.array()).square().sum();
  fit.r2 = ss_tot > 0.0 ? std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0) : 1.0;
  return fit;
}

double blowup_bound_margin(const RateFit& fit, const SectorCertificate& cert, double c1) {
  const double e = fit.predicted(cert);
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < fit.times.size(); ++i)
    m = std::min(m, c1 * std::pow(fit.times[i], e) - fit.norms[i]);
  return m;
}

GapReport holder_of_semigroup_gap(const OperatorPair& pair, const SectorCertificate& cert, int n,
                                  const std::optional<InterpolationIndex>& idx, double sigma,
                                  double c1, const std::vector<double>& s_grid,
                                  const std::vector<double>& t_grid, const RunConfig& cfg) {
  if (!(sigma > 0.0 && sigma < 1.0)) throw InvalidArgument("sigma must lie in (0,1)");
  std::map<double, Matrix> mats;
  const auto mat = [&](double t) -> const Matrix& {
    auto it = mats.find(t);
    if (it == mats.end()) it = mats.emplace(t, semigroup_matrix(pair, cert, t, n, cfg)).first;
    return it->second;
  };
  const double g = idx ? idx->gamma : 0.0;
  const double a = cert.alpha, b = cert.beta;
  GapReport rep;
  for (double s : s_grid) {
    if (!(s > 0.0)) throw InvalidArgument("gap grids need s > 0");
    for (double t : t_grid) {
      if (!(t > s)) continue;
      GapRow row{s, t, 0.0, 0.0, 0.0};
      row.gap = op_norm(pair, idx, mat(t) - mat(s), cfg);
      row.bound = c1 / sigma * std::pow(s, (a + b - n - 2.0 - g - a * sigma) / a) *
                  std::pow(t - s, sigma);
      row.margin = row.bound - row.gap;
      if (!(row.margin >= 0.0)) rep.holds = false;
      rep.rows.push_back(row);
    }
  }
  return rep;
}

std::string regime_name(Regime r) {
  switch (r) {
    case Regime::Lem41: return "Lem4.1";
    case Regime::Lem42: return "Lem4.2";
    case Regime::Lem43: return "Lem4.3";
    case Regime::Lem44: return "Lem4.4";
    case Regime::Lem45: return "Lem4.5";
    case Regime::Thm51: return "Thm5.1";
    case Regime::Thm53: return "Thm5.3";
    case Regime::Thm54: return "Thm5.4";
  }
  return "?";
}

const std::vector<Regime>& all_regimes() {
  static const std::vector<Regime> r{Regime::Lem41, Regime::Lem42, Regime::Lem43, Regime::Lem44,
                                     Regime::Lem45, Regime::Thm51, Regime::Thm53, Regime::Thm54};
  return r;
}

Regime parse_regime(const std::string& name) {
  for (Regime r : all_regimes())
    if (regime_name(r) == name) return r;
  throw InvalidArgument("unknown regime '" + name + "'");
}

ExponentGate gate(Regime regime, double a, double b, double g, double s, double mu) {
  ExponentGate eg;
  eg.regime = regime;
  eg.alpha = a;
  eg.beta = b;
  eg.gamma = g;
  eg.sigma = s;
  eg.mu = mu;
  auto& m = eg.margins;
  const auto add = [&](const char* name, double slack, bool closed = false) {
    m.push_back({name, slack, closed});
  };
  add("alpha > 0", a);
  add("alpha <= 1", 1.0 - a, true);
  add("beta > 0", b);
  add("beta < alpha", a - b);
  add("gamma > 0", g);
  add("gamma < 1", 1.0 - g);
  add("sigma > 0", s);
  add("sigma < 1", 1.0 - s);

  // gamma and sigma bounds share the form top - gamma and top - gamma - alpha*sigma.
  double top = 0.0;
  switch (regime) {
    case Regime::Lem41:
      add("2a+b-2 > 0", 2 * a + b - 2);
      top = 2 * a + b - 2;
      break;
    case Regime::Lem42:
    case Regime::Lem43:
      add("a+b-1 > 0", a + b - 1);
      top = a + b - 1;
      break;
    case Regime::Lem44:
      add("2a+b-2 > 0", 2 * a + b - 2);
      add("a*mu+a+b-2 > 0", a * mu + a + b - 2);
      add("mu < 1", 1.0 - mu);
      top = a * mu + a + b - 2;
      break;
    case Regime::Lem45:
    case Regime::Thm54:
      add("3a+b-3 > 0", 3 * a + b - 3);
      add("a*mu+2a+b-3 > 0", a * mu + 2 * a + b - 3);
      add("mu < 1", 1.0 - mu);
      top = a * mu + 2 * a + b - 3;
      break;
    case Regime::Thm51:
      add("2a+b-2 > 0", 2 * a + b - 2);
      add("a*mu+a+b-2 > 0", a * mu + a + b - 2);
      add("mu < 1", 1.0 - mu);
      top = 2 * a + b - 2;
      break;
    case Regime::Thm53:
      add("2a+b-2 > 0", 2 * a + b - 2);
      add("a+b-3/2 > 0", a + b - 1.5);
      add("a*mu+a+b-2 > 0", a * mu + a + b - 2);
      add("mu < 1", 1.0 - mu);
      add("gamma-2(a+b)+3 >= 0", g - 2 * (a + b) + 3, true);
      top = a + b - 1;
      break;
  }
  add("gamma < top", top - g);
  add("sigma < (top-gamma)/a", top - g - a * s);
  eg.sigma_sup = a > 0.0 ? (top - g) / a : 0.0;
  eg.admissible = std::all_of(m.begin(), m.end(), [](const GateMargin& x) { return x.ok(); });
  if (eg.admissible && regime != Regime::Lem43) eg.nu = (top - g - a * s) / a;
  return eg;
}

ExponentGate suggest_exponents(Regime regime, double alpha, double beta, double mu) {
  // top of the gamma interval is read off the gate with gamma = sigma = 0.
  const ExponentGate probe = gate(regime, alpha, beta, 0.0, 0.0, mu);
  const double top = probe.sigma_sup * alpha;
  const double lower = regime == Regime::Thm53 ? std::max(0.0, 2.0 * (alpha + beta) - 3.0) : 0.0;
  const double g = lower + 0.5 * (top - lower);
  const double s = std::min(0.5, 0.5 * (top - g) / alpha);
  return gate(regime, alpha, beta, g, s, mu);
}

std::vector<double> estimate_tilde_c(const OperatorPair& pair, const SectorCertificate& cert,
                                     int k_max, double t_min, double t_max, int n_points,
                                     const RunConfig& cfg) {
  if (k_max < 0 || !(t_min > 0.0 && t_max > t_min) || n_points < 2)
    throw InvalidArgument("bad tilde_c window");
  std::vector<double> out(k_max + 1, 0.0);
  for (double t : logspace(t_min, t_max, n_points)) {
    for (int k = 0; k <= k_max; ++k) {
      const double v = operator_norm(semigroup_matrix(pair, cert, t, k, cfg), pair.norm(), cfg);
      out[k] = std::max(out[k], std::pow(t, (k + 1.0 - cert.beta) / cert.alpha) * v);
    }
  }
  return out;
}

double estimate_c_gamma_p(const OperatorPair& pair, const InterpolationIndex& idx,
                          const std::vector<Vector>& extra, const RunConfig& cfg) {
  const InterpolationNorm inorm(pair, idx, cfg);
  std::vector<Vector> ys;
  Rng rng(cfg.seed + 1);
  for (int j = 0; j < 2 * pair.dim(); ++j)
    ys.push_back(pair.M() * random_vector(pair.dim(), rng, pair.is_real()));
  for (const auto& y : extra)
    if (y.size() == pair.dim() && solve_in_range(pair, y).residual <= cfg.range_tol)
      ys.push_back(y);
  double best = 0.0;
  for (const auto& y : ys) {
    const double yn = pair.norm_of(y);
    if (yn == 0.0) continue;
    const double dn = domain_norm(pair, y, cfg).total;
    const double denom = std::pow(yn, 1.0 - idx.gamma) * std::pow(dn, idx.gamma);
    best = std::max(best, inorm(y).total / denom);
  }
  return best;
}

EmpiricalConstants estimate_empirical_constants(const OperatorPair& pair,
                                                const SectorCertificate& cert,
                                                const InterpolationIndex& idx, double T,
                                                const std::vector<Vector>& extra,
                                                const RunConfig& cfg) {
  EmpiricalConstants e;
  e.tilde_c = estimate_tilde_c(pair, cert, 2, 1e-3, std::max(1.0, T), 13, cfg);
  std::vector<Vector> ys = extra;
  // Semigroup images are the vectors the interpolation inequality is applied to.
  Rng rng(cfg.seed + 2);
  for (double t : {1e-2, 1e-1, 1.0}) {
    const Vector x = random_vector(pair.dim(), rng, pair.is_real());
    ys.push_back(semigroup_apply(pair, cert, t, 0, x, cfg).value);
    ys.push_back(semigroup_apply(pair, cert, t, 1, x, cfg).value);
  }
  e.c_gamma_p = estimate_c_gamma_p(pair, idx, ys, cfg);
  return e;
}

Verdict theorem_harness(const ProblemInstance& prob, const SectorCertificate& cert, Regime regime,
                        const InterpolationIndex& idx, double sigma,
                        const std::vector<double>& grid, const RunConfig& cfg) {
  const double mu = prob.f.mu();
  Verdict v;
  v.regime = regime;
  v.gate = gate(regime, cert.alpha, cert.beta, idx.gamma, sigma, mu);
  if (!v.gate.admissible) {
    std::string failed;
    for (const auto& m : v.gate.margins)
      if (!m.ok()) failed += (failed.empty() ? "" : ", ") + m.name;
    throw GateRejected(regime_name(regime) + " rejects the exponents: " + failed);
  }
  if (grid.size() < 3 || grid.front() != 0.0) throw InvalidArgument("harness grid must start at 0");
  const double T = prob.T;
  const OperatorPair& pair = prob.pair;
  v.grid_points = static_cast<int>(grid.size());

  std::vector<Vector> values;
  std::optional<Vector> g0;
  switch (regime) {
    case Regime::Lem41:
    case Regime::Lem42:
      v.quantity = "Q1 f";
      for (double t : grid) values.push_back(q1_apply(prob, cert, t, cfg));
      break;
    case Regime::Lem43:
      v.quantity = "e^{tA} u0";
      for (double t : grid)
        values.push_back(t > 0.0 ? semigroup_apply(pair, cert, t, 0, prob.u0, cfg).value : prob.u0);
      break;
    case Regime::Lem44:
      v.quantity = "Q2 f";
      for (double t : grid) values.push_back(q2_apply(prob, cert, t, cfg));
      break;
    case Regime::Lem45:
      v.quantity = "Q3 f";
      for (double t : grid) values.push_back(q3_apply(prob, cert, t, cfg));
      break;
    case Regime::Thm51:
    case Regime::Thm53:
      v.quantity = "Mv";
      values = solve(prob, cert, grid, false, cfg).Mv;
      break;
    case Regime::Thm54:
      v.quantity = "DtMv";
      g0 = prob.consistency_g0();
      values = solve(prob, cert, grid, true, cfg).DtMv;
      break;
  }

  std::vector<Vector> extra{prob.u0};
  if (g0) extra.push_back(*g0);
  const EmpiricalConstants emp = estimate_empirical_constants(pair, cert, idx, T, extra, cfg);
  v.ledger = constants_ledger(cert, idx, T, sigma, mu, 1, emp);

  const InterpolationNorm inorm(pair, idx, cfg);
  v.holder = holder_seminorm(grid, values, sigma, [&](const Vector& x) { return inorm(x).total; });
  v.measured = v.holder.total;

  // Forcing norms on a refinement of the harness grid.
  std::vector<double> fine;
  for (int i = 0; i <= 256; ++i) fine.push_back(T * i / 256.0);
  for (double t : grid) fine.push_back(t);
  std::sort(fine.begin(), fine.end());
  fine.erase(std::unique(fine.begin(), fine.end()), fine.end());
  std::vector<Vector> fv;
  for (double t : fine) fv.push_back(prob.f.value(t));
  const NormFn xnorm = [&](const Vector& x) { return pair.norm_of(x); };
  const HolderReport f_mu = holder_seminorm(fine, fv, mu, xnorm);
  const HolderReport f_sigma = holder_seminorm(fine, fv, sigma, xnorm);
  const double f_sup = f_mu.sup_norm;

  const double Tn = std::pow(T, v.gate.nu);
  const auto& L = v.ledger;
  switch (regime) {
    case Regime::Lem41: v.bound = Tn * L.require(2) * f_sup; break;
    case Regime::Lem42: v.bound = Tn * L.require(3) * f_sigma.total; break;
    case Regime::Lem43: v.bound = L.require(4) * domain_norm(pair, prob.u0, cfg).total; break;
    case Regime::Lem44: v.bound = Tn * L.require(5) * f_mu.seminorm; break;
    case Regime::Lem45: v.bound = Tn * L.require(6) * f_mu.seminorm; break;
    case Regime::Thm51:
      v.bound = L.require(4) * domain_norm(pair, prob.u0, cfg).total + Tn * L.require(2) * f_sup;
      break;
    case Regime::Thm53:
      v.bound = L.require(4) * domain_norm(pair, prob.u0, cfg).total +
                Tn * L.require(3) * std::max(1.0, std::pow(T, mu - sigma)) * f_mu.total;
      break;
    case Regime::Thm54: {
      const double CT = std::pow(T, (1.0 - cert.alpha) / cert.alpha) * L.require(5) + L.require(6);
      v.bound = L.require(4) * domain_norm(pair, *g0, cfg).total + Tn * CT * f_mu.seminorm;
      break;
    }
  }
  v.margin = v.bound - v.measured;
  v.pass = std::isfinite(v.measured) && v.margin >= 0.0;
  return v;
}

}  // namespace degen
