#include "romshaper/learn/cmaes.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace romshaper {

int DefaultPopsize(int n) {
  if (n < 1) throw std::invalid_argument("DefaultPopsize: n must be >= 1");
  return 4 + static_cast<int>(std::floor(3.0 * std::log(n)));
}

CmaConstants CmaConstants::Make(int n, int lambda) {
  CmaConstants c;
  c.n = n;
  c.lambda = lambda;
  c.mu = lambda / 2;
  c.weights.resize(c.mu);
  for (int i = 0; i < c.mu; ++i) {
    c.weights(i) = std::log(c.mu + 0.5) - std::log(i + 1.0);
  }
  c.weights /= c.weights.sum();
  c.mu_eff = 1.0 / c.weights.squaredNorm();
  const double nd = n;
  c.c_sigma = (c.mu_eff + 2.0) / (nd + c.mu_eff + 5.0);
  c.d_sigma = 1.0 +
              2.0 * std::max(0.0, std::sqrt((c.mu_eff - 1.0) / (nd + 1.0)) - 1.0) +
              c.c_sigma;
  c.c_c = (4.0 + c.mu_eff / nd) / (nd + 4.0 + 2.0 * c.mu_eff / nd);
  c.c_1 = 2.0 / ((nd + 1.3) * (nd + 1.3) + c.mu_eff);
  c.c_mu = std::min(1.0 - c.c_1, 2.0 * (c.mu_eff - 2.0 + 1.0 / c.mu_eff) /
                                     ((nd + 2.0) * (nd + 2.0) + c.mu_eff));
  c.chi_n = std::sqrt(nd) * (1.0 - 1.0 / (4.0 * nd) + 1.0 / (21.0 * nd * nd));
  return c;
}

CmaState CmaesInit(const Eigen::VectorXd& theta0, double sigma0,
                   std::uint64_t seed, int popsize) {
  if (!(sigma0 > 0.0)) {
    throw std::invalid_argument("CmaesInit: sigma0 must be > 0");
  }
  const int n = static_cast<int>(theta0.size());
  CmaState s;
  s.mean = theta0;
  s.cov = Eigen::MatrixXd::Identity(n, n);
  s.basis = Eigen::MatrixXd::Identity(n, n);
  s.scales = Eigen::VectorXd::Ones(n);
  s.sigma = sigma0;
  s.path_sigma = Eigen::VectorXd::Zero(n);
  s.path_c = Eigen::VectorXd::Zero(n);
  s.popsize = popsize > 0 ? popsize : DefaultPopsize(n);
  if (s.popsize < 2) throw std::invalid_argument("CmaesInit: popsize < 2");
  s.rng.seed(seed);
  return s;
}

std::vector<Eigen::VectorXd> CmaesAsk(CmaState& state) {
  const int n = state.dim();
  // A fresh distribution per call keeps the engine the only hidden state.
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Eigen::VectorXd> samples;
  samples.reserve(state.popsize);
  Eigen::VectorXd z(n);
  for (int k = 0; k < state.popsize; ++k) {
    for (int i = 0; i < n; ++i) z(i) = normal(state.rng);
    samples.push_back(state.mean +
                      state.sigma * (state.basis * state.scales.cwiseProduct(z)));
  }
  return samples;
}

std::vector<int> RankSamples(const std::vector<double>& fitness,
                             bool maximize) {
  std::vector<int> order(fitness.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return maximize ? fitness[a] > fitness[b] : fitness[a] < fitness[b];
  });
  return order;
}

void CmaesTell(CmaState& state, const std::vector<Eigen::VectorXd>& samples,
               const std::vector<double>& fitness, bool maximize) {
  const int n = state.dim();
  if (static_cast<int>(samples.size()) != state.popsize ||
      samples.size() != fitness.size()) {
    throw std::invalid_argument("CmaesTell: expected " +
                                std::to_string(state.popsize) +
                                " samples and fitness values");
  }
  for (size_t i = 0; i < fitness.size(); ++i) {
    if (!std::isfinite(fitness[i])) {
      throw std::invalid_argument("CmaesTell: non-finite fitness at sample " +
                                  std::to_string(i));
    }
  }
  const CmaConstants c = state.constants();
  const std::vector<int> order = RankSamples(fitness, maximize);

  Eigen::MatrixXd steps(n, c.mu);
  for (int i = 0; i < c.mu; ++i) {
    steps.col(i) = (samples[order[i]] - state.mean) / state.sigma;
  }
  const Eigen::VectorXd step_w = steps * c.weights;
  state.mean += state.sigma * step_w;

  // C^{-1/2} y_w = B D^{-1} B' y_w.
  const Eigen::VectorXd whitened =
      state.basis *
      (state.basis.transpose() * step_w).cwiseQuotient(state.scales);
  state.path_sigma = (1.0 - c.c_sigma) * state.path_sigma +
                     std::sqrt(c.c_sigma * (2.0 - c.c_sigma) * c.mu_eff) *
                         whitened;
  const double ps_norm = state.path_sigma.norm();
  const double decay =
      1.0 - std::pow(1.0 - c.c_sigma, 2.0 * (state.generation + 1));
  const bool h_sigma =
      ps_norm / std::sqrt(decay) < (1.4 + 2.0 / (n + 1.0)) * c.chi_n;
  state.path_c = (1.0 - c.c_c) * state.path_c +
                 (h_sigma ? std::sqrt(c.c_c * (2.0 - c.c_c) * c.mu_eff) : 0.0) *
                     step_w;

  const double delta_h = h_sigma ? 0.0 : c.c_c * (2.0 - c.c_c);
  Eigen::MatrixXd rank_mu = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < c.mu; ++i) {
    rank_mu.noalias() += c.weights(i) * steps.col(i) * steps.col(i).transpose();
  }
  state.cov = (1.0 - c.c_1 - c.c_mu + c.c_1 * delta_h) * state.cov +
              c.c_1 * state.path_c * state.path_c.transpose() +
              c.c_mu * rank_mu;
  state.cov = 0.5 * (state.cov + state.cov.transpose()).eval();

  state.sigma *= std::exp((c.c_sigma / c.d_sigma) * (ps_norm / c.chi_n - 1.0));

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(state.cov);
  const double top = eig.eigenvalues().maxCoeff();
  state.basis = eig.eigenvectors();
  state.scales =
      eig.eigenvalues().cwiseMax(1e-20 * std::max(top, 1e-300)).cwiseSqrt();
  ++state.generation;
}

}  // namespace romshaper
