#pragma once

#include <optional>
#include <string>
#include <vector>

#include "msiq/read_model.hpp"

namespace msiq {

struct EmConfig {
  double tol = 1e-8;   // stop once the log-likelihood gain drops below this
  int max_iter = 1000;
  std::vector<double> init;  // empty selects the uniform simplex point
};

enum class EstimatorKind {
  Avg,
  AvgOracle,
  Pool,
  PoolOracle,
  MsiqA,
  MsiqP,
};

const char* estimator_name(EstimatorKind kind);
std::optional<EstimatorKind> estimator_from_name(const std::string& name);

struct EmResult {
  std::vector<double> tau;
  int iterations = 0;
  double loglik = 0.0;
};

/// Per-sample proportion estimate by EM on the sample's generating matrix.
/// The log-likelihood is checked to be non-decreasing at every iteration;
/// a decrease beyond floating-point slack throws and is counted.
EmResult em_single_sample(const GeneratingMatrix& H, const EmConfig& config);

/// Number of EM monotonicity violations observed process-wide. Stays zero
/// unless em_single_sample threw a monotonicity error.
long em_monotonicity_violations();

struct EstimateResult {
  std::vector<double> alpha_hat;
  std::vector<int> em_iterations;   // one entry per EM run
  std::vector<double> logliks;      // final log-likelihood per EM run
  std::vector<int> selected_samples;  // 0-based sample indices used
};

/// The competing estimators: averaging / pooling over all samples, over the
/// true informative group (oracle kinds), or over the group identified by
/// the chain's theta_hat (MSIQ kinds, strict threshold). When no theta_hat
/// exceeds the threshold, the single sample with the largest theta_hat is
/// used.
EstimateResult estimate(EstimatorKind kind,
                        const std::vector<GeneratingMatrix>& H,
                        const EmConfig& config,
                        const std::optional<std::vector<int>>& true_E = {},
                        const std::optional<std::vector<double>>& theta_hat = {},
                        double threshold = 0.5);

}  // namespace msiq
