#include "degen/spectral_certifier.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

namespace degen {

namespace {

std::vector<double> logspace(double lo_exp, double hi_exp, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i)
    v[i] = std::pow(10.0, n == 1 ? hi_exp : lo_exp + (hi_exp - lo_exp) * i / (n - 1));
  return v;
}

Complex boundary_point(double alpha, double c, double eta) {
  return {-c * std::pow(std::abs(eta) + 1.0, alpha), eta};
}

double wrapped_angle(Complex from, Complex to) { return std::arg(to / from); }

}  // namespace

void SectorCertificate::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ValidationError("certificate: alpha must lie in (0, 1]");
  if (!(beta > 0.0 && beta < alpha)) throw ValidationError("certificate: need 0 < beta < alpha");
  if (!(c > 0.0) || !(C > 0.0)) throw ValidationError("certificate: c and C must be positive");
}

double SectorCertificate::bound(Complex lambda) const {
  return C * std::pow(std::abs(lambda) + 1.0, -beta);
}

bool SectorCertificate::contains(Complex lambda) const {
  return lambda.real() >= -c * std::pow(std::abs(lambda.imag()) + 1.0, alpha);
}

std::vector<Complex> probe_points(const RegionProbePlan& plan, double alpha, double c) {
  if (plan.n_boundary < 16) throw InvalidArgument("probe plan: n_boundary must be at least 16");
  if (!(plan.eta_max > 1.0)) throw InvalidArgument("probe plan: eta_max must exceed 1");
  const double top = std::log10(plan.eta_max);
  std::vector<Complex> pts;

  const auto etas = logspace(-2.0, top, plan.n_boundary / 2);
  pts.push_back(boundary_point(alpha, c, 0.0));
  for (double e : etas) {
    pts.push_back(boundary_point(alpha, c, e));
    pts.push_back(boundary_point(alpha, c, -e));
  }

  const auto ys = logspace(-1.0, top, std::max(8, plan.n_interior / 2));
  pts.emplace_back(0.0, 0.0);
  for (double y : ys) {
    pts.emplace_back(0.0, y);
    pts.emplace_back(0.0, -y);
  }

  for (int r = 1; r <= plan.radial_levels; ++r) {
    const double theta = static_cast<double>(r) / (plan.radial_levels + 1);
    for (std::size_t k = 0; k < etas.size(); k += 2) {
      const double re = theta * boundary_point(alpha, c, etas[k]).real();
      pts.emplace_back(re, etas[k]);
      pts.emplace_back(re, -etas[k]);
    }
  }

  const auto radii = logspace(-1.0, top, std::max(4, plan.n_interior / 4));
  for (double angle : {0.0, std::numbers::pi / 4, -std::numbers::pi / 4})
    for (double r : radii) pts.push_back(std::polar(r, angle));
  return pts;
}

std::vector<ResolventSample> probe_resolvent_norms(const OperatorPair& pair,
                                                   const RegionProbePlan& plan, double alpha,
                                                   double c, const RunConfig& cfg) {
  if (!(alpha > 0.0 && alpha <= 1.0) || !(c > 0.0))
    throw InvalidArgument("probe_resolvent_norms: need alpha in (0,1] and c > 0");
  const int n = pair.dim();
  const Matrix I = Matrix::Identity(n, n);
  std::vector<ResolventSample> out;
  for (Complex lambda : probe_points(plan, alpha, c)) {
    const PencilFactor pf(pair, lambda, cfg);
    Matrix R(n, n);
    for (int j = 0; j < n; ++j) R.col(j) = pair.M() * pf.solve(I.col(j));
    out.push_back({lambda, operator_norm(R, pair.norm(), cfg)});
  }
  return out;
}

int count_pencil_eigenvalues(const OperatorPair& pair, double alpha, double c, double eta_max,
                             const RunConfig& cfg) {
  const double H = eta_max;
  const double R = eta_max;
  const double left = -c * std::pow(H + 1.0, alpha);
  const double u_max = std::asinh(H);

  // Counterclockwise around the truncated region: bottom edge, right edge,
  // top edge, then down the boundary curve.
  const std::vector<std::function<Complex(double)>> segments = {
      [&](double s) { return Complex(left + (R - left) * s, -H); },
      [&](double s) { return Complex(R, -H + 2.0 * H * s); },
      [&](double s) { return Complex(R + (left - R) * s, H); },
      [&](double s) { return boundary_point(alpha, c, std::sinh(u_max * (1.0 - 2.0 * s))); },
  };

  auto phase = [&](Complex lambda) { return PencilFactor(pair, lambda, cfg).det_phase(); };

  std::function<double(const std::function<Complex(double)>&, double, double, Complex, Complex, int)>
      accumulate = [&](const auto& seg, double s0, double s1, Complex p0, Complex p1,
                       int depth) -> double {
    const double d = wrapped_angle(p0, p1);
    if (std::abs(d) < 0.4) return d;
    if (depth > 40) throw NoConvergence("winding count: phase could not be resolved");
    const double sm = 0.5 * (s0 + s1);
    const Complex pm = phase(seg(sm));
    return accumulate(seg, s0, sm, p0, pm, depth + 1) + accumulate(seg, sm, s1, pm, p1, depth + 1);
  };

  constexpr int kInitial = 256;
  double total = 0.0;
  for (const auto& seg : segments) {
    Complex prev = phase(seg(0.0));
    for (int k = 1; k <= kInitial; ++k) {
      const double s0 = static_cast<double>(k - 1) / kInitial;
      const double s1 = static_cast<double>(k) / kInitial;
      const Complex next = phase(seg(s1));
      total += accumulate(seg, s0, s1, prev, next, 0);
      prev = next;
    }
  }
  return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
}

SectorCertificate fit_certificate(const std::vector<ResolventSample>& samples, double alpha,
                                  double c, const RunConfig& cfg) {
  std::vector<double> xs, ys;
  for (const auto& s : samples) {
    if (s.lambda.real() == 0.0 && s.norm > 0.0) {
      xs.push_back(std::log(std::abs(s.lambda) + 1.0));
      ys.push_back(std::log(s.norm));
    }
  }
  if (xs.size() < 32) throw InvalidArgument("fit_certificate: need at least 32 imaginary-axis samples");
  const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
  if (*hi - *lo < 2.0 * std::log(10.0))
    throw InvalidArgument("fit_certificate: samples must span at least two decades of |lambda|+1");

  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  double beta = -sxy / sxx;
  if (!(beta > 0.0))
    throw InsufficientDecay("fitted resolvent decay exponent " + std::to_string(beta) +
                            " is not positive");
  if (beta >= alpha) beta = alpha - cfg.beta_gap;

  SectorCertificate cert;
  cert.alpha = alpha;
  cert.beta = beta;
  cert.c = c;
  cert.C = 0.0;
  for (const auto& s : samples)
    cert.C = std::max(cert.C, s.norm * std::pow(std::abs(s.lambda) + 1.0, beta));
  cert.samples = samples;
  cert.residual = revalidate(cert, samples);
  if (cert.residual > cfg.fit_tol) throw InsufficientDecay("certificate residual exceeds fit_tol");
  cert.validate();
  return cert;
}

SectorCertificate fit_certificate(std::span<const RegionProbe> probes, const RunConfig& cfg) {
  const RegionProbe* best = nullptr;
  for (const auto& p : probes) {
    if (!p.ok) continue;
    if (best == nullptr || p.alpha > best->alpha || (p.alpha == best->alpha && p.c > best->c))
      best = &p;
  }
  if (best == nullptr) throw SingularPencil("no probed region lies in the M-modified resolvent set");
  return fit_certificate(best->samples, best->alpha, best->c, cfg);
}

SectorCertificate certify(const OperatorPair& pair, const RegionProbePlan& plan,
                          std::vector<double> alpha_grid, std::vector<double> c_grid,
                          const RunConfig& cfg, std::vector<RegionProbe>* attempts) {
  std::sort(alpha_grid.rbegin(), alpha_grid.rend());
  std::sort(c_grid.rbegin(), c_grid.rend());
  std::vector<RegionProbe> local;
  for (double alpha : alpha_grid) {
    for (double c : c_grid) {
      RegionProbe probe{alpha, c, false, {}, {}};
      try {
        const int inside = count_pencil_eigenvalues(pair, alpha, c * plan.c_safety, plan.eta_max, cfg);
        if (inside != 0) {
          probe.failure = std::to_string(inside) + " pencil eigenvalue(s) inside the widened region";
        } else {
          probe.samples = probe_resolvent_norms(pair, plan, alpha, c, cfg);
          probe.ok = true;
        }
      } catch (const Error& e) {
        probe.failure = e.what();
      }
      local.push_back(std::move(probe));
      if (local.back().ok) {
        if (attempts) attempts->insert(attempts->end(), local.begin(), local.end());
        return fit_certificate(std::span<const RegionProbe>(local), cfg);
      }
    }
  }
  if (attempts) attempts->insert(attempts->end(), local.begin(), local.end());
  throw SingularPencil("no region of the (alpha, c) grid lies in the M-modified resolvent set");
}

const std::vector<double>& default_alpha_grid() {
  static const std::vector<double> g{1.0, 0.9, 0.8, 0.7, 0.6, 0.5};
  return g;
}

const std::vector<double>& default_c_grid() {
  static const std::vector<double> g{4.0, 2.0, 1.0, 0.5, 0.25, 0.1, 0.05};
  return g;
}

double revalidate(const SectorCertificate& cert, const std::vector<ResolventSample>& samples) {
  double worst = 0.0;
  for (const auto& s : samples) {
    if (!cert.contains(s.lambda)) continue;
    worst = std::max(worst, s.norm / cert.bound(s.lambda) - 1.0);
  }
  return std::max(0.0, worst);
}

}  // namespace degen
