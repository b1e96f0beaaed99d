#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace romshaper {

/// 4 + floor(3 ln n).
int DefaultPopsize(int n);

/// Strategy constants of (mu/mu_w, lambda)-CMA-ES, derived from n and lambda.
struct CmaConstants {
  int n = 0;
  int lambda = 0;
  int mu = 0;
  Eigen::VectorXd weights;
  double mu_eff = 0.0;
  double c_sigma = 0.0;
  double d_sigma = 0.0;
  double c_c = 0.0;
  double c_1 = 0.0;
  double c_mu = 0.0;
  double chi_n = 0.0;

  static CmaConstants Make(int n, int lambda);
};

/// Complete optimizer state; serializing every field (plus the engine state)
/// is enough to resume bit-identically.
struct CmaState {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
  /// Eigenvectors of cov and the square roots of its eigenvalues.
  Eigen::MatrixXd basis;
  Eigen::VectorXd scales;
  double sigma = 1.0;
  Eigen::VectorXd path_sigma;
  Eigen::VectorXd path_c;
  int generation = 0;
  int popsize = 0;
  std::mt19937_64 rng;

  int dim() const { return static_cast<int>(mean.size()); }
  CmaConstants constants() const {
    return CmaConstants::Make(dim(), popsize);
  }
};

CmaState CmaesInit(const Eigen::VectorXd& theta0, double sigma0,
                   std::uint64_t seed, int popsize = 0);

/// popsize samples mean + sigma * B D z, z ~ N(0, I).
std::vector<Eigen::VectorXd> CmaesAsk(CmaState& state);

/// Rank-based update from the samples returned by the last ask. Ties keep
/// sample-index order. Throws std::invalid_argument on a non-finite fitness.
void CmaesTell(CmaState& state, const std::vector<Eigen::VectorXd>& samples,
               const std::vector<double>& fitness, bool maximize);

/// Indices of samples from best to worst.
std::vector<int> RankSamples(const std::vector<double>& fitness,
                             bool maximize);

}  // namespace romshaper
