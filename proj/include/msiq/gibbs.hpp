#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "msiq/read_model.hpp"
#include "msiq/rng.hpp"

namespace msiq {

/// Priors of the joint model: Dirichlet(lambda) on isoform proportions and
/// Beta(a, b) on the probability of a sample being informative.
struct Hyperparameters {
  std::vector<double> lambda;
  double a = 1.0;
  double b = 1.0;

  /// Uniform priors (lambda_j = 1 for all j, a = b = 1).
  static Hyperparameters uniform(int num_isoforms);
  void validate(int num_isoforms) const;
};

/// State of the collapsed sampler: per-read isoform origins (0-based column
/// indices into the generating matrices), per-sample informative indicators,
/// and the informative-group weight gamma.
struct ChainState {
  std::vector<std::vector<int>> z;
  std::vector<int> e;
  double gamma = 0.5;
};

/// Chain output: posterior-mean estimates of the informative-group isoform
/// proportions and of each sample's informative probability.
struct PosteriorSummary {
  std::vector<double> alpha_hat;
  std::vector<double> theta_hat;
  int iterations = 0;
  int burn_in = 0;
  std::uint64_t seed = 0;
  std::vector<std::vector<double>> alpha_trace;  // filled when requested
};

struct ChainConfig {
  int iterations = 2000;
  int burn_in = 500;
  std::uint64_t seed = 1;
  bool keep_alpha_trace = false;
};

/// Log of the collapsed joint P(R, Z, E, gamma | lambda, a, b), up to the
/// global constant dropped by the proportional form. Computed entirely in
/// log space. Throws when a read is assigned to an isoform with h = 0.
double log_collapsed_joint(const ChainState& state,
                           const std::vector<GeneratingMatrix>& H,
                           const Hyperparameters& hyper);

/// P(E_d = 1 | everything else) under the collapsed model.
double conditional_informative_probability(const ChainState& state, int d,
                                           const std::vector<GeneratingMatrix>& H,
                                           const Hyperparameters& hyper);

/// Conditional origin distribution q over isoform columns for read i of
/// sample d; zero outside the read's support {j : h_ij > 0}.
std::vector<double> conditional_origin_distribution(
    const ChainState& state, int d, int i,
    const std::vector<GeneratingMatrix>& H, const Hyperparameters& hyper);

/// Parameters of the Beta conditional of gamma: (sum E + a, D - sum E + b).
std::pair<double, double> gamma_posterior_params(const ChainState& state,
                                                 const Hyperparameters& hyper);

/// Single-coordinate Gibbs updates; each draws from the conditional above
/// and writes the new value into the state. Return the drawn value.
int sample_E(ChainState& state, int d, const std::vector<GeneratingMatrix>& H,
             const Hyperparameters& hyper, Rng& rng);
int sample_Z(ChainState& state, int d, int i,
             const std::vector<GeneratingMatrix>& H,
             const Hyperparameters& hyper, Rng& rng);
double sample_gamma(ChainState& state, const Hyperparameters& hyper, Rng& rng);

/// Runs burn_in + iterations full sweeps (all E in sample order, all Z in
/// read order, then gamma) and averages the per-iteration proportion
/// estimates over the retained sweeps. Deterministic given the seed.
PosteriorSummary run_chain(const std::vector<GeneratingMatrix>& H,
                           const Hyperparameters& hyper,
                           const ChainConfig& config);

struct ExactPosterior {
  std::vector<double> alpha;
  std::vector<double> theta;
};

/// Exact posterior by enumeration of all (Z, E) configurations with gamma
/// integrated analytically; verification oracle for small instances. The
/// configuration count prod_d J^{n_d} * 2^D must not exceed 10^6.
ExactPosterior exact_posterior(const std::vector<GeneratingMatrix>& H,
                               const Hyperparameters& hyper);

}  // namespace msiq
