#include "degen/semigroup.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <string>

namespace degen {

namespace {

constexpr double kEtaFloor = 1e-13;  // contour below this eta contributes nothing resolvable

// Pairwise summation in a fixed order: a binary counter of partial sums.
class PairwiseAccumulator {
 public:
  void add(Vector v) {
    std::size_t level = 0;
    while (level < slots_.size() && slots_[level].has_value()) {
      v = *slots_[level] + v;
      slots_[level].reset();
      ++level;
    }
    if (level == slots_.size()) slots_.emplace_back();
    slots_[level] = std::move(v);
  }
  Vector total(int dim) const {
    Vector out = Vector::Zero(dim);
    bool first = true;
    for (const auto& s : slots_) {
      if (!s) continue;
      out = first ? *s : Vector(*s + out);
      first = false;
    }
    return out;
  }

 private:
  std::vector<std::optional<Vector>> slots_;
};

struct Column {
  Vector x;
  bool real = false;
  bool done = false;
  Vector coarse, fine;  // quadrature sums before the final multiplication by M
  PropagationResult result;
};

// Sums over the given nodes and their mirrors for every active column.
void integrate(const OperatorPair& pair, const ContourSpec& contour, double t, int n,
               const std::vector<ContourNode>& nodes, std::vector<Column>& cols, bool into_fine,
               const RunConfig& cfg) {
  const int dim = pair.dim();
  bool need_mirror = false;
  for (const auto& col : cols)
    if (!col.done && !col.real) need_mirror = true;

  std::vector<PairwiseAccumulator> acc(cols.size());
  const Complex inv_two_pi_i = 1.0 / Complex(0.0, 2.0 * std::numbers::pi);
  for (const ContourNode& node : nodes) {
    const Complex lp = contour.point(node.eta);
    const Complex wp = node.weight * inv_two_pi_i * contour.tangent(node.eta) *
                       std::pow(lp, n) * std::exp(t * lp);
    const PencilFactor fp(pair, lp, cfg);
    std::optional<PencilFactor> fm;
    Complex wm;
    if (need_mirror) {
      const Complex lm = contour.point(-node.eta);
      wm = node.weight * inv_two_pi_i * contour.tangent(-node.eta) * std::pow(lm, n) *
           std::exp(t * lm);
      fm.emplace(pair, lm, cfg);
    }
    for (std::size_t j = 0; j < cols.size(); ++j) {
      Column& col = cols[j];
      if (col.done) continue;
      Vector plus = wp * fp.solve_unchecked(col.x);
      if (col.real) {
        // For real M, L and x the mirror node contributes the complex conjugate.
        acc[j].add(Vector((2.0 * plus.real()).cast<Complex>()));
      } else {
        acc[j].add(Vector(plus + wm * fm->solve_unchecked(col.x)));
      }
    }
  }
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j].done) continue;
    (into_fine ? cols[j].fine : cols[j].coarse) = acc[j].total(dim);
  }
}

struct GradedMap {
  double rho, v_min, dv;
  ContourNode at(double v) const {
    const double eta = v > 0.0 ? rho * (v + std::log1p(std::exp(-v))) : rho * std::log1p(std::exp(v));
    const double deta = rho / (1.0 + std::exp(-v));
    return {eta, deta * dv};
  }
};

// eta = rho * log(1 + e^v) on [v_min, v_max] split into n intervals: geometric
// spacing near the origin, where the integrand decays like e^v, and spacing
// rho * dv far out, where rho follows the oscillation period of e^{t lambda}.
GradedMap graded_map(const ContourSpec& contour, int n) {
  const double rho = contour.grading_scale;
  const double v_min = std::log(kEtaFloor / rho);
  const double r = contour.eta_cut / rho;
  const double v_max = r > 30.0 ? r + std::log1p(-std::exp(-r)) : std::log(std::expm1(r));
  return {rho, v_min, (v_max - v_min) / n};
}

// Trapezoid nodes with odd index only, at full weight: the increment from n/2 to n intervals.
std::vector<ContourNode> odd_nodes(const ContourSpec& contour, int n_half) {
  const GradedMap g = graded_map(contour, n_half);
  std::vector<ContourNode> nodes;
  for (int k = 1; k < n_half; k += 2) nodes.push_back(g.at(g.v_min + k * g.dv));
  return nodes;
}

}  // namespace

Complex ContourSpec::point(double eta) const {
  return {-c * std::pow(std::abs(eta) + 1.0, alpha), eta};
}

Complex ContourSpec::tangent(double eta) const {
  const double sgn = eta > 0.0 ? 1.0 : (eta < 0.0 ? -1.0 : 0.0);
  return {-c * alpha * std::pow(std::abs(eta) + 1.0, alpha - 1.0) * sgn, 1.0};
}

std::vector<ContourNode> half_nodes(const ContourSpec& contour, int n_half) {
  if (n_half <= 0) throw InvalidArgument("half_nodes: need a positive node count");
  std::vector<ContourNode> nodes;
  if (contour.rule == QuadratureRule::Uniform) {
    const double h = contour.eta_cut / n_half;
    for (int k = 0; k < n_half; ++k) nodes.push_back({(k + 0.5) * h, h});
    return nodes;
  }
  const GradedMap g = graded_map(contour, n_half);
  if (contour.rule == QuadratureRule::MidpointLogGraded) {
    for (int k = 0; k < n_half; ++k) nodes.push_back(g.at(g.v_min + (k + 0.5) * g.dv));
    return nodes;
  }
  for (int k = 0; k <= n_half; ++k) {
    ContourNode node = g.at(g.v_min + k * g.dv);
    if (k == 0 || k == n_half) node.weight *= 0.5;
    nodes.push_back(node);
  }
  return nodes;
}

double eta_cut_for(double alpha, double c, double t, int n, const RunConfig& cfg) {
  if (!(t > 0.0)) throw InvalidArgument("eta_cut_for: t must be positive");
  const double log_tol = std::log(1.0 / cfg.trunc_tol);
  auto solve_for = [&](double extra) { return std::pow((log_tol + extra) / (t * c), 1.0 / alpha) - 1.0; };
  double eta = solve_for(0.0);
  for (int it = 0; it < 50 && n > 0; ++it) {
    const double next = solve_for(n * std::log((c + 1.0) * (std::max(eta, 0.0) + 1.0)));
    if (std::abs(next - eta) <= 1e-9 * std::max(1.0, eta)) {
      eta = next;
      break;
    }
    eta = next;
    if (eta > 10.0 * cfg.eta_cut_cap) break;
  }
  eta = std::max(eta, 1.0);
  if (eta > cfg.eta_cut_cap) {
    const double tail = std::exp(-t * c * std::pow(cfg.eta_cut_cap + 1.0, alpha));
    throw TruncationDominates("contour tail e^{-tc(eta_cut+1)^alpha} = " + std::to_string(tail) +
                              " exceeds trunc_tol at the eta_cut cap (t = " + std::to_string(t) + ")");
  }
  return eta;
}

ContourSpec contour_for(const SectorCertificate& cert, double t, int n, const RunConfig& cfg) {
  ContourSpec spec;
  spec.alpha = cert.alpha;
  spec.c = cert.c;
  spec.eta_cut = eta_cut_for(cert.alpha, cert.c, t, n, cfg);
  spec.grading_scale = std::max(1.0, 1.0 / t);
  spec.n_nodes = cfg.initial_nodes;
  return spec;
}

std::vector<PropagationResult> semigroup_columns(const OperatorPair& pair,
                                                 const SectorCertificate& cert,
                                                 const ContourSpec& contour, double t, int n,
                                                 const Matrix& X, const RunConfig& cfg) {
  const int dim = pair.dim();
  if (X.rows() != dim) throw InvalidArgument("semigroup_apply: dimension mismatch");
  if (n < 0) throw InvalidArgument("semigroup_apply: n must be nonnegative");
  if (contour.alpha != cert.alpha || contour.c != cert.c)
    throw InvalidArgument("semigroup_apply: contour must share (alpha, c) with the certificate");
  if (contour.n_nodes < 4 || contour.n_nodes % 4 != 0)
    throw InvalidArgument("semigroup_apply: n_nodes must be a positive multiple of 4");

  std::vector<Column> cols(X.cols());
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    cols[j].x = X.col(j);
    cols[j].real = pair.is_real() && X.col(j).imag().isZero(0.0);
    cols[j].result.t = t;
    cols[j].result.n = n;
  }

  if (t == 0.0) {
    if (n != 0) throw InvalidArgument("semigroup_apply: A^n e^{0A} is undefined for n >= 1");
    for (auto& col : cols) col.result.value = col.x;
    std::vector<PropagationResult> out;
    for (auto& col : cols) out.push_back(col.result);
    return out;
  }
  if (!(t > 0.0)) throw InvalidArgument("semigroup_apply: t must be nonnegative");
  for (const auto& col : cols)
    if (!all_finite(col.x)) throw InvalidArgument("semigroup_apply: non-finite input vector");

  // The trapezoid levels are nested: a doubling only visits the new odd nodes.
  const bool nested = contour.rule == QuadratureRule::TrapezoidLogGraded;
  const auto refine = [&](int nh) {
    if (!nested) return integrate(pair, contour, t, n, half_nodes(contour, nh), cols, true, cfg);
    integrate(pair, contour, t, n, odd_nodes(contour, nh), cols, true, cfg);
    for (auto& col : cols)
      if (!col.done) col.fine += 0.5 * col.coarse;
  };
  int n_half = contour.n_nodes / 2;
  integrate(pair, contour, t, n, half_nodes(contour, n_half / 2), cols, false, cfg);
  refine(n_half);
  while (true) {
    bool any_active = false;
    for (auto& col : cols) {
      if (col.done) continue;
      const Vector fine = pair.M() * col.fine;
      const double err = pair.norm_of(pair.M() * (col.fine - col.coarse));
      const double scale = std::max(pair.norm_of(col.x), pair.norm_of(fine));
      if (err <= cfg.quad_tol * scale) {
        col.result.value = fine;
        col.result.est_quad_error = err;
        col.result.nodes_used = 2 * n_half;
        col.done = true;
      } else {
        any_active = true;
      }
    }
    if (!any_active) break;
    if (4 * n_half > cfg.node_budget)
      throw NoConvergence("semigroup quadrature did not reach quad_tol within the node budget (t = " +
                          std::to_string(t) + ", n = " + std::to_string(n) + ")");
    for (auto& col : cols)
      if (!col.done) col.coarse = col.fine;
    n_half *= 2;
    refine(n_half);
  }
  std::vector<PropagationResult> out;
  out.reserve(cols.size());
  for (auto& col : cols) out.push_back(std::move(col.result));
  return out;
}

PropagationResult semigroup_apply(const OperatorPair& pair, const SectorCertificate& cert,
                                  const ContourSpec& contour, double t, int n, const Vector& x,
                                  const RunConfig& cfg) {
  Matrix X = x;
  return semigroup_columns(pair, cert, contour, t, n, X, cfg).front();
}

PropagationResult semigroup_apply(const OperatorPair& pair, const SectorCertificate& cert, double t,
                                  int n, const Vector& x, const RunConfig& cfg) {
  if (t == 0.0) {
    ContourSpec spec;
    spec.alpha = cert.alpha;
    spec.c = cert.c;
    return semigroup_apply(pair, cert, spec, t, n, x, cfg);
  }
  return semigroup_apply(pair, cert, contour_for(cert, t, n, cfg), t, n, x, cfg);
}

Matrix semigroup_matrix(const OperatorPair& pair, const SectorCertificate& cert,
                        const ContourSpec& contour, double t, int n, const RunConfig& cfg) {
  const int dim = pair.dim();
  const auto cols = semigroup_columns(pair, cert, contour, t, n, Matrix::Identity(dim, dim), cfg);
  Matrix out(dim, dim);
  for (int j = 0; j < dim; ++j) out.col(j) = cols[j].value;
  return out;
}

Matrix semigroup_matrix(const OperatorPair& pair, const SectorCertificate& cert, double t, int n,
                        const RunConfig& cfg) {
  if (t == 0.0) {
    if (n != 0) throw InvalidArgument("semigroup_matrix: A^n e^{0A} is undefined for n >= 1");
    return Matrix::Identity(pair.dim(), pair.dim());
  }
  return semigroup_matrix(pair, cert, contour_for(cert, t, n, cfg), t, n, cfg);
}

}  // namespace degen
