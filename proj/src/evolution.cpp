#include "degen/evolution.hpp"

#include "degen/semigroup.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <map>

namespace degen {

namespace {

double shift_eps(double t) { return 64.0 * DBL_EPSILON * std::max(1.0, std::abs(t)); }

/// Sum of e^{sA} y over (s, y) pairs; equal shifts share one application.
class ShiftedSum {
 public:
  explicit ShiftedSum(int dim) : identity_(Vector::Zero(dim)) {}

  void add(double s, const Vector& y) {
    if (s <= shift_eps(s)) {
      identity_ += y;
      return;
    }
    auto [it, fresh] = terms_.try_emplace(s, y);
    if (!fresh) it->second += y;
  }

  Vector evaluate(const OperatorPair& pair, const SectorCertificate& cert, const RunConfig& cfg,
                  double* quad_error) const {
    Vector out = identity_;
    double err = 0.0;
    for (const auto& [s, y] : terms_) {
      if (y.cwiseAbs().maxCoeff() == 0.0) continue;
      const auto r = semigroup_apply(pair, cert, s, 0, y, cfg);
      out += r.value;
      err += r.est_quad_error;
    }
    if (quad_error) *quad_error = err;
    return out;
  }

 private:
  Vector identity_;
  std::map<double, Vector> terms_;
};

/// sum_k A^{-(k+1)} h_k by nested application of A^{-1}.
Vector inverse_series(const OperatorPair& pair, const std::vector<Vector>& h) {
  Vector acc = Vector::Zero(pair.dim());
  for (auto k = h.size(); k-- > 0;) acc = apply_inverse_generator(pair, h[k] + acc);
  return acc;
}

/// Adds the integration-by-parts terms of [Q1 f^{(m)}](t).
void add_q1_terms(const ProblemInstance& prob, int m, double t, ShiftedSum& sum) {
  const Forcing& f = prob.f;
  const int K = f.degree() - m;
  if (K < 0 || t <= 0.0) return;
  const auto series_at = [&](int piece, double at) {
    std::vector<Vector> h;
    for (int k = 0; k <= K; ++k) h.push_back(f.piece_derivative(piece, at, k + m));
    return inverse_series(prob.pair, h);
  };
  const double eps = shift_eps(t);
  sum.add(t, series_at(f.piece_of(0.0, false), 0.0));
  int last = 0;
  for (int j = 1; j < f.piece_count(); ++j) {
    const double b = f.starts()[j];
    if (!(b < t - eps)) break;
    last = j;
    if (b <= 0.0) continue;
    std::vector<Vector> jump;
    for (int k = 0; k <= K; ++k)
      jump.push_back(f.piece_derivative(j, b, k + m) - f.piece_derivative(j - 1, b, k + m));
    sum.add(t - b, inverse_series(prob.pair, jump));
  }
  sum.add(0.0, -series_at(last, t));
}

void check_time(const ProblemInstance& prob, double t) {
  if (!(t >= 0.0 && t <= prob.T * (1.0 + 1e-12)))
    throw InvalidArgument("time outside [0, T]");
}

}  // namespace

void ProblemInstance::validate(const RunConfig& cfg) const {
  const int n = pair.dim();
  if (!(T > 0.0 && std::isfinite(T))) throw ValidationError("T must be positive and finite");
  if (u0.size() != n || !u0.allFinite()) throw ValidationError("u0 has the wrong dimension");
  if (f.dim() != n) throw ValidationError("forcing has the wrong dimension");
  if (solve_in_range(pair, u0).residual > cfg.range_tol)
    throw ValidationError("u0 must lie in the range of M");
  const double scale = std::max(1.0, pair.norm_of(u0));
  std::optional<Vector> v = v0;
  if (v && (v->size() != n || !v->allFinite())) throw ValidationError("v0 has the wrong dimension");
  if (g0) {
    if (g0->size() != n || !g0->allFinite()) throw ValidationError("g0 has the wrong dimension");
    if (solve_in_range(pair, *g0).residual > cfg.range_tol)
      throw ValidationError("g0 must lie in the range of M");
    const Vector implied = pair.solve_L(*g0 - f.value(0.0));
    if (v) {
      const Vector g = pair.L() * *v + f.value(0.0);
      if (pair.norm_of(g - *g0) > cfg.range_tol * std::max(1.0, pair.norm_of(*g0)))
        throw ValidationError("g0 must equal L v0 + f(0)");
    } else {
      v = implied;
    }
  }
  if (v) {
    if (pair.norm_of(pair.M() * *v - u0) > cfg.range_tol * scale)
      throw ValidationError("M v0 must equal u0");
    if (!g0) {
      const Vector g = pair.L() * *v + f.value(0.0);
      if (solve_in_range(pair, g).residual > cfg.range_tol)
        throw ValidationError("L v0 + f(0) must lie in the range of M");
    }
  }
}

Vector ProblemInstance::consistency_g0() const {
  if (g0) return *g0;
  if (v0) return pair.L() * *v0 + f.value(0.0);
  throw ConsistencyMissing("derivative needs v0 or g0");
}

Vector q1_apply(const ProblemInstance& prob, const SectorCertificate& cert, double t,
                const RunConfig& cfg, double* quad_error) {
  check_time(prob, t);
  ShiftedSum sum(prob.pair.dim());
  add_q1_terms(prob, 0, t, sum);
  return sum.evaluate(prob.pair, cert, cfg, quad_error);
}

Vector q2_apply(const ProblemInstance& prob, const SectorCertificate& cert, double t,
                const RunConfig& cfg, double* quad_error) {
  check_time(prob, t);
  ShiftedSum sum(prob.pair.dim());
  if (t > 0.0) sum.add(t, prob.f.value(t) - prob.f.value(0.0));
  return sum.evaluate(prob.pair, cert, cfg, quad_error);
}

Vector q3_apply(const ProblemInstance& prob, const SectorCertificate& cert, double t,
                const RunConfig& cfg, double* quad_error) {
  check_time(prob, t);
  ShiftedSum sum(prob.pair.dim());
  if (t > 0.0) {
    sum.add(t, prob.f.value(0.0) - prob.f.value(t));
    add_q1_terms(prob, 1, t, sum);
  }
  return sum.evaluate(prob.pair, cert, cfg, quad_error);
}

SolutionTrace solve(const ProblemInstance& prob, const SectorCertificate& cert,
                    const std::vector<double>& grid, bool with_derivative,
                    const RunConfig& cfg) {
  if (grid.empty() || grid.front() != 0.0) throw InvalidArgument("grid must start at 0");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw InvalidArgument("grid must increase strictly");
  Vector g0;
  if (with_derivative) g0 = prob.consistency_g0();
  const OperatorPair& pair = prob.pair;

  SolutionTrace tr;
  tr.grid = grid;
  for (double t : grid) {
    check_time(prob, t);
    ShiftedSum mv(pair.dim());
    mv.add(t, prob.u0);
    add_q1_terms(prob, 0, t, mv);
    double err = 0.0;
    tr.Mv.push_back(mv.evaluate(pair, cert, cfg, &err));
    const Vector& Mv = tr.Mv.back();
    const double scale = std::max(1.0, pair.norm_of(Mv));
    double resid;
    if (with_derivative) {
      // Q2 + Q3 collapses to Q1 applied to f'.
      ShiftedSum d(pair.dim());
      d.add(t, g0);
      add_q1_terms(prob, 1, t, d);
      double derr = 0.0;
      tr.DtMv.push_back(d.evaluate(pair, cert, cfg, &derr));
      err += derr;
      const Vector v = pair.solve_L(tr.DtMv.back() - prob.f.value(t));
      resid = pair.norm_of(pair.M() * v - Mv) / scale;
    } else {
      resid = solve_in_range(pair, Mv).residual;
    }
    tr.quad_error.push_back(err);
    tr.residual.push_back(resid);
    if (t > 0.0 && !(resid <= cfg.resid_tol)) tr.residual_ok = false;
  }
  return tr;
}

std::vector<double> initial_value_defect(const ProblemInstance& prob, const SolutionTrace& trace) {
  std::vector<double> out;
  for (const auto& mv : trace.Mv)
    out.push_back(prob.pair.norm_of(apply_inverse_generator(prob.pair, mv - prob.u0)));
  return out;
}

double ConstantLedger::require(int k) const {
  if (k < 1 || k > 8) throw UnknownEntry("ledger entries are c1..c8");
  if (!c[k]) throw InadmissibleExponents("c" + std::to_string(k) + " diverges for these exponents");
  return *c[k];
}

std::string_view ConstantLedger::provenance(std::string_view entry) {
  if (entry == "tilde_c" || entry == "c_gamma_p") return "empirical";
  return "formula";
}

ConstantLedger constants_ledger(const SectorCertificate& cert, const InterpolationIndex& idx,
                                double T, double sigma, double mu, int n,
                                const EmpiricalConstants& emp) {
  idx.validate();
  if (!(T > 0.0)) throw InvalidArgument("T must be positive");
  if (!(sigma > 0.0 && sigma < 1.0)) throw InvalidArgument("sigma must lie in (0,1)");
  if (!(mu > 0.0 && mu <= 1.0)) throw InvalidArgument("mu must lie in (0,1]");
  if (n < 0 || static_cast<int>(emp.tilde_c.size()) < n + 2)
    throw InvalidArgument("ledger needs tilde_c up to order n+1");

  ConstantLedger led;
  const double a = cert.alpha, b = cert.beta, g = idx.gamma, s = sigma;
  led.alpha = a;
  led.beta = b;
  led.gamma = g;
  led.sigma = s;
  led.mu = mu;
  led.T = T;
  led.n = n;
  led.tilde_c = emp.tilde_c;
  led.c_gamma_p = emp.c_gamma_p;

  double c1 = -1.0;
  for (int k = 0; k <= n; ++k) {
    const double tk = emp.tilde_c[k], tk1 = emp.tilde_c[k + 1];
    const double C = emp.c_gamma_p * std::pow(tk, 1.0 - g) * std::pow(tk + tk1, g);
    const double Cp = std::pow(2.0, (2.0 * (k + 1 - b) + g) / a) * tk * C;
    const double v = C + Cp * std::pow(T, g / a);
    if (v > c1) {
      c1 = v;
      led.C = C;
      led.C_prime = Cp;
    }
  }
  led.c[1] = c1;

  const auto ratio = [&](int entry, double num, double den) -> std::optional<double> {
    if (den > 0.0) return num / den;
    led.divergent.push_back("c" + std::to_string(entry));
    return std::nullopt;
  };
  const double Tq = std::pow(T, (1.0 - a) / a);
  const double Ts = std::pow(T, s);

  const auto c2a = ratio(2, Tq * (Ts + 1.0), a + b - 1.0 - g);
  const auto c2b = ratio(2, 1.0 / s, 2.0 * a + b - 2.0 - g - a * s);
  if (c2a && c2b) led.c[2] = a * c1 * (*c2a + *c2b);

  if (const auto c3 = ratio(3, a * c1 * (2.0 * Ts + 1.0), a + b - 1.0 - g)) led.c[3] = *c3;

  led.c[4] = emp.c_gamma_p + c1 * std::pow(T, (a + b - 1.0 - g - a * s) / a) * (Ts + 1.0);
  led.c[5] = c1 * (Tq * (Ts + 1.0) + 1.0 / s);

  const auto c8a = ratio(8, 1.0 / s, a * mu + 2.0 * a + b - 3.0 - g - a * s);
  const double d1 = 2.0 + g - a - b;
  const double d2 = a * mu + a + b - 2.0 - g;
  const auto c8b = ratio(8, a * mu * Tq, d1 > 0.0 && d2 > 0.0 ? d1 * d2 : -1.0);
  if (c8a && c8b) {
    const double c8 = *c8a + *c8b;
    led.c[8] = c8;
    led.c[7] = a * c1 * c8;
    if (const auto c6 = ratio(6, std::pow(T, (1.0 - a + a * s) / a), d2))
      led.c[6] = a * c1 * (*c6 + c8);
  } else {
    led.divergent.push_back("c6");
    led.divergent.push_back("c7");
  }
  std::sort(led.divergent.begin(), led.divergent.end());
  led.divergent.erase(std::unique(led.divergent.begin(), led.divergent.end()),
                      led.divergent.end());
  return led;
}

}  // namespace degen
