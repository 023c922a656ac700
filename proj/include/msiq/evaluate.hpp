#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "msiq/em.hpp"
#include "msiq/gibbs.hpp"
#include "msiq/simulate.hpp"

namespace msiq {

struct ReeDetail {
  double value = 0.0;
  int skipped_zero = 0;  // coordinates with alpha_j = 0 but alpha_hat_j != 0
};

/// Relative estimation error: sum over j of |alpha_j - alpha_hat_j| / alpha_j.
/// Coordinates with alpha_j = 0 contribute nothing when the estimate is also
/// zero; otherwise they are skipped and counted in the detail form.
double ree(const std::vector<double>& alpha_true,
           const std::vector<double>& alpha_hat);
ReeDetail ree_detail(const std::vector<double>& alpha_true,
                     const std::vector<double>& alpha_hat);

/// Fragment-length / read-length settings used by the sweep.
struct LengthSetting {
  int setting_id = 1;
  double frag_mean = 150.0;
  int read_len = 50;

  static LengthSetting for_setting(int setting_id);
};

struct ReeRow {
  std::string gene_id;
  int scenario = 0;
  int setting = 0;
  int replicate = 0;
  std::string estimator;
  double ree = 0.0;
};

struct ReeAggregate {
  int scenario = 0;
  int setting = 0;
  std::string estimator;
  int n = 0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double mean = 0.0;
};

struct SweepFailure {
  std::string gene_id;
  int scenario = 0;
  int setting = 0;
  int replicate = 0;
  std::string error;
};

struct ReeReport {
  std::vector<ReeRow> rows;
  std::vector<ReeAggregate> aggregates;
  std::vector<SweepFailure> failures;
  long zero_alpha_skips = 0;
};

struct SweepConfig {
  std::vector<int> scenarios = {1, 2, 3, 4, 5};
  std::vector<int> settings = {1};
  int replicates = 1;
  int num_samples = 10;
  int n_reads = 500;
  double frag_sd = 10.0;
  std::uint64_t seed = 1;
  int workers = 1;
  double lambda = 1.0;  // broadcast to all isoforms of each gene
  double a = 1.0;
  double b = 1.0;
  ChainConfig chain;    // chain.seed is derived per row; field ignored
  EmConfig em;
  double threshold = 0.5;
};

/// Simulates every (gene, scenario, setting, replicate) cell, runs the chain
/// estimator and the six EM-based estimators, and reports per-row REE values
/// with median/quartile aggregates. Per-cell errors become row-level
/// failures. Deterministic given the seed, independent of worker count.
ReeReport sweep(const std::vector<GeneModel>& genes, const SweepConfig& config);

/// Aggregates recomputed from rows (used internally and as a consistency
/// oracle): linear-interpolation quantiles over each (scenario, setting,
/// estimator) group, in canonical group order.
std::vector<ReeAggregate> aggregate_rows(const std::vector<ReeRow>& rows);

/// Linear-interpolation quantile of a sorted sample.
double quantile_sorted(const std::vector<double>& sorted, double p);

}  // namespace msiq
