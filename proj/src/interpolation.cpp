#include "degen/interpolation.hpp"

#include "degen/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace degen {

namespace {

constexpr int kRefinedCandidates = 4;
constexpr int kAscentNodes = 3;
constexpr double kGoldenTol = 1e-7;

double total_ratio(double total, double probe_norm) {
  return probe_norm > 0.0 ? total / probe_norm : 0.0;
}

}  // namespace

void InterpolationIndex::validate() const {
  if (!(gamma > 0.0 && gamma < 1.0)) throw InvalidArgument("gamma must lie in (0,1)");
  if (!(p >= 1.0)) throw InvalidArgument("p must be >= 1 or infinity");
}

InterpolationNorm::InterpolationNorm(const OperatorPair& pair, InterpolationIndex idx,
                                     const RunConfig& cfg)
    : pair_(&pair), idx_(idx), cfg_(cfg) {
  idx_.validate();
  if (!(cfg.xi_min > 0.0 && cfg.xi_max > cfg.xi_min) || cfg.xi_nodes < 4)
    throw InvalidArgument("bad xi window");
  const double a = std::log(cfg.xi_min);
  const double ds = (std::log(cfg.xi_max) - a) / cfg.xi_nodes;
  const int n = pair.dim();
  const Matrix I = Matrix::Identity(n, n);
  s_.resize(cfg.xi_nodes);
  B_.resize(cfg.xi_nodes);
  for (int k = 0; k < cfg.xi_nodes; ++k) {
    s_[k] = a + (k + 0.5) * ds;
    const double xi = std::exp(s_[k]);
    Matrix inv(n, n);
    const PencilFactor pf(pair, Complex(xi, 0.0), cfg);
    for (int j = 0; j < n; ++j) inv.col(j) = pf.solve(I.col(j));
    B_[k] = std::pow(xi, idx_.gamma) * (pair.L() * inv);
  }
}

double InterpolationNorm::phi(double s, const Vector& x) const {
  const double xi = std::exp(s);
  const PencilFactor pf(*pair_, Complex(xi, 0.0), cfg_);
  const Vector y = pair_->L() * pf.solve(x);
  return std::pow(xi, idx_.gamma) * pair_->norm_of(y);
}

InterpNormReport InterpolationNorm::assemble(const Vector& x,
                                             const Eigen::VectorXd& phi_k) const {
  InterpNormReport r;
  r.x_norm = pair_->norm_of(x);
  r.xi_min = cfg_.xi_min;
  r.xi_max = cfg_.xi_max;
  const int N = static_cast<int>(s_.size());
  const double ds = s_[1] - s_[0];
  if (phi_k.maxCoeff() == 0.0) {
    r.total = r.x_norm;
    r.converged = true;
    return r;
  }
  const auto slope = [&](int i, int j) {
    if (phi_k(i) <= 0.0 || phi_k(j) <= 0.0) return 0.0;
    return (std::log(phi_k(j)) - std::log(phi_k(i))) / (s_[j] - s_[i]);
  };
  const double k_lo = slope(0, 1);
  const double k_hi = slope(N - 2, N - 1);
  if (k_hi >= 0.0 && phi_k(N - 1) > 0.0)
    throw Diverged("interpolation integrand does not decay at xi_max");

  if (idx_.p_is_inf()) {
    int best = 0;
    for (int k = 1; k < N; ++k)
      if (phi_k(k) > phi_k(best)) best = k;
    double lo = best > 0 ? s_[best - 1] : s_[0] - 0.5 * ds;
    double hi = best < N - 1 ? s_[best + 1] : s_[N - 1] + 0.5 * ds;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = phi(x1, x), f2 = phi(x2, x);
    while (hi - lo > kGoldenTol) {
      if (f1 < f2) {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + g * (hi - lo);
        f2 = phi(x2, x);
      } else {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - g * (hi - lo);
        f1 = phi(x1, x);
      }
    }
    r.seminorm = std::max({phi_k(best), f1, f2});
    // A maximum on the lower edge would continue below the window.
    r.tail_estimate = best == 0 && k_lo < 0.0 ? r.seminorm : 0.0;
  } else {
    const double p = idx_.p;
    double inner = 0.0;
    for (int k = 0; k < N; ++k) inner += std::pow(phi_k(k), p) * ds;
    double tails = 0.0;
    bool tails_ok = true;
    if (phi_k(0) > 0.0) {
      // Below the window phi ~ xi^gamma ||x|| once xi is under the spectrum.
      const double kl = k_lo > 0.0 ? k_lo : idx_.gamma;
      tails_ok = k_lo > 0.0;
      tails += std::pow(phi_k(0), p) * std::exp(-0.5 * p * kl * ds) / (p * kl);
    }
    if (phi_k(N - 1) > 0.0)
      tails += std::pow(phi_k(N - 1), p) * std::exp(0.5 * p * k_hi * ds) / (p * -k_hi);
    r.seminorm = std::pow(inner + tails, 1.0 / p);
    r.tail_estimate = r.seminorm - std::pow(inner, 1.0 / p);
    if (!tails_ok) r.tail_estimate = std::max(r.tail_estimate, r.seminorm);
  }
  r.total = r.x_norm + r.seminorm;
  r.converged = r.tail_estimate <= cfg_.tail_tol * r.total;
  return r;
}

InterpNormReport InterpolationNorm::operator()(const Vector& x) const {
  if (x.size() != pair_->dim()) throw InvalidArgument("vector dimension mismatch");
  Eigen::VectorXd phi_k(static_cast<Eigen::Index>(s_.size()));
  for (std::size_t k = 0; k < s_.size(); ++k) phi_k(k) = pair_->norm_of(B_[k] * x);
  return assemble(x, phi_k);
}

double InterpolationNorm::ratio_sup(const Matrix& images, const Matrix& probes) const {
  const int m = static_cast<int>(images.cols());
  if (probes.cols() != m) throw InvalidArgument("probe and image counts differ");
  const int N = static_cast<int>(s_.size());
  Eigen::MatrixXd phi(N, m);
  for (int k = 0; k < N; ++k) {
    const Matrix Y = B_[k] * images;
    for (int j = 0; j < m; ++j) phi(k, j) = pair_->norm_of(Y.col(j));
  }
  std::vector<double> ratio(m);
  std::vector<double> pnorm(m);
  for (int j = 0; j < m; ++j) {
    pnorm[j] = pair_->norm_of(probes.col(j));
    double total;
    if (idx_.p_is_inf()) {
      if (phi(N - 1, j) > 0.0 && phi(N - 1, j) >= phi(N - 2, j))
        throw Diverged("interpolation integrand does not decay at xi_max");
      total = pair_->norm_of(images.col(j)) + phi.col(j).maxCoeff();
    } else {
      total = assemble(images.col(j), phi.col(j)).total;
    }
    ratio[j] = total_ratio(total, pnorm[j]);
  }
  double best = *std::max_element(ratio.begin(), ratio.end());
  if (idx_.p_is_inf()) {
    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return ratio[a] > ratio[b]; });
    for (int i = 0; i < std::min(m, kRefinedCandidates); ++i) {
      const int j = order[i];
      const double total = assemble(images.col(j), phi.col(j)).total;
      best = std::max(best, total_ratio(total, pnorm[j]));
    }
  }
  return best;
}

InterpNormReport interp_norm(const OperatorPair& pair, const InterpolationIndex& idx,
                             const Vector& x, const RunConfig& cfg) {
  return InterpolationNorm(pair, idx, cfg)(x);
}

Matrix InterpolationNorm::ascent_directions(const Matrix& images_of_basis) const {
  const Matrix& B = images_of_basis;
  const int n = static_cast<int>(B.cols());
  const auto top_right = [](const Matrix& G) -> Vector {
    Eigen::SelfAdjointEigenSolver<Matrix> es(G);
    return es.eigenvectors().col(G.cols() - 1);
  };
  std::vector<Vector> dirs;
  const Matrix G0 = B.adjoint() * B;
  dirs.push_back(top_right(G0));
  const int N = static_cast<int>(s_.size());
  if (idx_.p_is_inf()) {
    std::vector<double> fro(N);
    std::vector<Matrix> BB(N);
    for (int k = 0; k < N; ++k) {
      BB[k] = B_[k] * B;
      fro[k] = BB[k].norm();
    }
    std::vector<int> order(N);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return fro[a] > fro[b]; });
    for (int i = 0; i < std::min(N, kAscentNodes); ++i) {
      const Matrix Gk = BB[order[i]].adjoint() * BB[order[i]];
      dirs.push_back(top_right(Gk));
      dirs.push_back(top_right(Gk + G0));
    }
  } else {
    const double ds = s_[1] - s_[0];
    Matrix G = Matrix::Zero(n, n);
    for (int k = 0; k < N; ++k) {
      const Matrix Y = B_[k] * B;
      G += ds * (Y.adjoint() * Y);
    }
    dirs.push_back(top_right(G));
    dirs.push_back(top_right(G + G0));
  }
  Matrix out(n, static_cast<Eigen::Index>(dirs.size()));
  for (std::size_t j = 0; j < dirs.size(); ++j) out.col(j) = dirs[j];
  return out;
}

Matrix interp_probe_set(int dim, bool real_only, const RunConfig& cfg) {
  Matrix P(dim, 3 * dim);
  P.leftCols(dim) = Matrix::Identity(dim, dim);
  Rng rng(cfg.seed);
  for (int j = 0; j < 2 * dim; ++j) P.col(dim + j) = random_vector(dim, rng, real_only);
  return P;
}

double interp_operator_norm(const OperatorPair& pair, const InterpolationIndex& idx,
                            const Matrix& B, const RunConfig& cfg) {
  const InterpolationNorm inorm(pair, idx, cfg);
  const Matrix R = interp_probe_set(pair.dim(), pair.is_real(), cfg);
  const Matrix D = inorm.ascent_directions(B);
  Matrix P(R.rows(), R.cols() + D.cols());
  P << R, D;
  return inorm.ratio_sup(B * P, P);
}

double interp_operator_norm(const OperatorPair& pair, const InterpolationIndex& idx,
                            const LinearMap& apply, const RunConfig& cfg) {
  const Matrix R = interp_probe_set(pair.dim(), pair.is_real(), cfg);
  Matrix images(pair.dim(), R.cols());
  for (int j = 0; j < R.cols(); ++j) {
    const Vector y = apply(R.col(j));
    if (y.size() != pair.dim()) throw InvalidArgument("map changes dimension");
    images.col(j) = y;
  }
  // The leading probes are the basis vectors, so their images form the matrix of the map.
  return interp_operator_norm(pair, idx, Matrix(images.leftCols(pair.dim())), cfg);
}

}  // namespace degen
