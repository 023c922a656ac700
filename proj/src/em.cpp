#include "msiq/em.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

namespace msiq {

namespace {

std::atomic<long> g_monotonicity_violations{0};

double log_likelihood(const GeneratingMatrix& H, const std::vector<double>& tau) {
  double ll = 0.0;
  for (int i = 0; i < H.rows(); ++i) {
    double mix = 0.0;
    for (int j = 0; j < H.cols(); ++j) mix += H(i, j) * tau[j];
    if (!(mix > 0.0))
      throw std::invalid_argument("em: read with no positive generating probability");
    ll += std::log(mix);
  }
  return ll;
}

GeneratingMatrix concat_rows(const std::vector<GeneratingMatrix>& H,
                             const std::vector<int>& samples) {
  std::vector<std::vector<double>> rows;
  for (int d : samples) {
    for (int i = 0; i < H[d].rows(); ++i) {
      std::vector<double> row(H[d].cols());
      for (int j = 0; j < H[d].cols(); ++j) row[j] = H[d](i, j);
      rows.push_back(std::move(row));
    }
  }
  if (rows.empty())
    throw std::invalid_argument("estimate: selected samples contain no reads");
  return GeneratingMatrix(std::move(rows));
}

std::vector<int> all_samples(int D) {
  std::vector<int> s(D);
  for (int d = 0; d < D; ++d) s[d] = d;
  return s;
}

std::vector<int> oracle_samples(const std::vector<int>& true_E, int D) {
  if (static_cast<int>(true_E.size()) != D)
    throw std::invalid_argument("estimate: true_E size must equal sample count");
  std::vector<int> s;
  for (int d = 0; d < D; ++d) {
    if (true_E[d] != 0 && true_E[d] != 1)
      throw std::invalid_argument("estimate: true_E entries must be 0 or 1");
    if (true_E[d] == 1) s.push_back(d);
  }
  if (s.empty())
    throw std::invalid_argument("estimate: oracle informative group is empty");
  return s;
}

std::vector<int> msiq_samples(const std::vector<double>& theta, int D,
                              double threshold) {
  if (static_cast<int>(theta.size()) != D)
    throw std::invalid_argument("estimate: theta_hat size must equal sample count");
  std::vector<int> s;
  for (int d = 0; d < D; ++d)
    if (theta[d] > threshold) s.push_back(d);
  if (s.empty()) {
    // Fall back to the single most plausible sample (first index on ties).
    int best = 0;
    for (int d = 1; d < D; ++d)
      if (theta[d] > theta[best]) best = d;
    s.push_back(best);
  }
  return s;
}

}  // namespace

const char* estimator_name(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::Avg: return "avg";
    case EstimatorKind::AvgOracle: return "avg-oracle";
    case EstimatorKind::Pool: return "pool";
    case EstimatorKind::PoolOracle: return "pool-oracle";
    case EstimatorKind::MsiqA: return "msiqa";
    case EstimatorKind::MsiqP: return "msiqp";
  }
  return "unknown";
}

std::optional<EstimatorKind> estimator_from_name(const std::string& name) {
  if (name == "avg") return EstimatorKind::Avg;
  if (name == "avg-oracle") return EstimatorKind::AvgOracle;
  if (name == "pool") return EstimatorKind::Pool;
  if (name == "pool-oracle") return EstimatorKind::PoolOracle;
  if (name == "msiqa") return EstimatorKind::MsiqA;
  if (name == "msiqp") return EstimatorKind::MsiqP;
  return std::nullopt;
}

long em_monotonicity_violations() { return g_monotonicity_violations.load(); }

EmResult em_single_sample(const GeneratingMatrix& H, const EmConfig& config) {
  const int J = H.cols();
  if (H.rows() < 1)
    throw std::invalid_argument("em_single_sample: no reads");
  if (!(config.tol > 0.0))
    throw std::invalid_argument("em_single_sample: tol must be > 0");
  if (config.max_iter < 1)
    throw std::invalid_argument("em_single_sample: max_iter must be >= 1");

  std::vector<double> tau;
  if (config.init.empty()) {
    tau.assign(J, 1.0 / static_cast<double>(J));
  } else {
    if (static_cast<int>(config.init.size()) != J)
      throw std::invalid_argument("em_single_sample: init size must equal isoform count");
    double sum = 0.0;
    for (double v : config.init) {
      if (v < 0.0) throw std::invalid_argument("em_single_sample: negative init entry");
      sum += v;
    }
    if (std::fabs(sum - 1.0) > 1e-9)
      throw std::invalid_argument("em_single_sample: init must lie on the simplex");
    tau = config.init;
  }

  double ll = log_likelihood(H, tau);
  int it = 0;
  std::vector<double> next(J);
  while (it < config.max_iter) {
    std::fill(next.begin(), next.end(), 0.0);
    for (int i = 0; i < H.rows(); ++i) {
      double mix = 0.0;
      for (int j = 0; j < J; ++j) mix += H(i, j) * tau[j];
      for (int j = 0; j < J; ++j) next[j] += H(i, j) * tau[j] / mix;
    }
    const double n = static_cast<double>(H.rows());
    for (int j = 0; j < J; ++j) next[j] /= n;
    const double ll_next = log_likelihood(H, next);
    if (ll_next < ll - 1e-9 * (1.0 + std::fabs(ll))) {
      g_monotonicity_violations.fetch_add(1);
      throw std::logic_error("em_single_sample: log-likelihood decreased");
    }
    tau = next;
    const double gain = ll_next - ll;
    ll = ll_next;
    ++it;
    if (gain < config.tol) break;
  }
  return {std::move(tau), it, ll};
}

EstimateResult estimate(EstimatorKind kind,
                        const std::vector<GeneratingMatrix>& H,
                        const EmConfig& config,
                        const std::optional<std::vector<int>>& true_E,
                        const std::optional<std::vector<double>>& theta_hat,
                        double threshold) {
  if (H.empty()) throw std::invalid_argument("estimate: no samples");
  const int D = static_cast<int>(H.size());
  const int J = H.front().cols();
  for (const GeneratingMatrix& m : H)
    if (m.cols() != J)
      throw std::invalid_argument("estimate: samples disagree on isoform count");

  std::vector<int> selected;
  bool pool_mode = false;
  switch (kind) {
    case EstimatorKind::Avg:
      selected = all_samples(D);
      break;
    case EstimatorKind::Pool:
      selected = all_samples(D);
      pool_mode = true;
      break;
    case EstimatorKind::AvgOracle:
    case EstimatorKind::PoolOracle:
      if (!true_E)
        throw std::invalid_argument("estimate: oracle estimator needs true_E");
      selected = oracle_samples(*true_E, D);
      pool_mode = kind == EstimatorKind::PoolOracle;
      break;
    case EstimatorKind::MsiqA:
    case EstimatorKind::MsiqP:
      if (!theta_hat)
        throw std::invalid_argument("estimate: MSIQ estimator needs theta_hat");
      selected = msiq_samples(*theta_hat, D, threshold);
      pool_mode = kind == EstimatorKind::MsiqP;
      break;
  }

  EstimateResult out;
  out.selected_samples = selected;
  if (pool_mode) {
    const EmResult r = em_single_sample(concat_rows(H, selected), config);
    out.alpha_hat = r.tau;
    out.em_iterations.push_back(r.iterations);
    out.logliks.push_back(r.loglik);
  } else {
    out.alpha_hat.assign(J, 0.0);
    for (int d : selected) {
      const EmResult r = em_single_sample(H[d], config);
      for (int j = 0; j < J; ++j) out.alpha_hat[j] += r.tau[j];
      out.em_iterations.push_back(r.iterations);
      out.logliks.push_back(r.loglik);
    }
    const double k = static_cast<double>(selected.size());
    for (double& v : out.alpha_hat) v /= k;
  }
  return out;
}

}  // namespace msiq
