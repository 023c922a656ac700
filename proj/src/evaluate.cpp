#include "msiq/evaluate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <stdexcept>
#include <thread>

namespace msiq {

double ree(const std::vector<double>& alpha_true,
           const std::vector<double>& alpha_hat) {
  return ree_detail(alpha_true, alpha_hat).value;
}

ReeDetail ree_detail(const std::vector<double>& alpha_true,
                     const std::vector<double>& alpha_hat) {
  if (alpha_true.size() != alpha_hat.size())
    throw std::invalid_argument("ree: dimension mismatch");
  ReeDetail out;
  for (std::size_t j = 0; j < alpha_true.size(); ++j) {
    if (alpha_true[j] > 0.0) {
      out.value += std::fabs(alpha_true[j] - alpha_hat[j]) / alpha_true[j];
    } else if (alpha_hat[j] != 0.0) {
      out.skipped_zero++;
    }
  }
  return out;
}

LengthSetting LengthSetting::for_setting(int setting_id) {
  switch (setting_id) {
    case 1: return {1, 150.0, 50};
    case 2: return {2, 250.0, 50};
    case 3: return {3, 150.0, 100};
    case 4: return {4, 250.0, 100};
  }
  throw std::invalid_argument("LengthSetting: setting must be 1..4");
}

double quantile_sorted(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("quantile of empty sample");
  if (sorted.size() == 1) return sorted.front();
  const double h = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(h);
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

std::vector<ReeAggregate> aggregate_rows(const std::vector<ReeRow>& rows) {
  std::map<std::tuple<int, int, std::string>, std::vector<double>> groups;
  for (const ReeRow& row : rows)
    groups[{row.scenario, row.setting, row.estimator}].push_back(row.ree);
  std::vector<ReeAggregate> out;
  out.reserve(groups.size());
  for (auto& [key, values] : groups) {
    std::sort(values.begin(), values.end());
    ReeAggregate agg;
    agg.scenario = std::get<0>(key);
    agg.setting = std::get<1>(key);
    agg.estimator = std::get<2>(key);
    agg.n = static_cast<int>(values.size());
    agg.median = quantile_sorted(values, 0.5);
    agg.q1 = quantile_sorted(values, 0.25);
    agg.q3 = quantile_sorted(values, 0.75);
    double mean = 0.0;
    for (double v : values) mean += v;
    agg.mean = mean / static_cast<double>(values.size());
    out.push_back(std::move(agg));
  }
  return out;
}

namespace {

struct Cell {
  int gene_index;
  int scenario;
  int setting;
  int replicate;
};

struct CellOutcome {
  std::vector<ReeRow> rows;
  std::string error;  // non-empty marks a failure
  int skipped_zero = 0;
};

// The boxplot order used throughout the reports.
constexpr const char* kEstimatorOrder[] = {
    "msiq", "avg-oracle", "msiqa", "avg", "pool-oracle", "msiqp", "pool"};

CellOutcome run_cell(const GeneModel& gene, const Cell& cell,
                     const SweepConfig& cfg) {
  CellOutcome out;
  const int J = gene.num_isoforms();
  const auto setting = LengthSetting::for_setting(cell.setting);

  // Proportions are drawn once per (gene, replicate) and shared across
  // scenarios and settings, so setting comparisons are paired.
  Rng prop_rng(derive_seed(cfg.seed, cell.gene_index, cell.replicate, 0, 0, 0));
  const Proportions props = gen_proportions(J, prop_rng);
  const ScenarioSpec spec =
      ScenarioSpec::for_scenario(cell.scenario, cfg.num_samples);
  const auto taus = make_scenario(spec, props.alpha, props.betas);
  const std::vector<int> true_e = true_informative(spec);

  SimConfig sim;
  sim.n_reads = cfg.n_reads;
  sim.frag_mean = setting.frag_mean;
  sim.frag_sd = cfg.frag_sd;
  sim.read_len = setting.read_len;
  Rng sim_rng(derive_seed(cfg.seed, cell.gene_index, cell.replicate,
                          cell.scenario, cell.setting, 1));
  const FragmentLengthModel flm{setting.frag_mean, cfg.frag_sd};
  std::vector<GeneratingMatrix> H;
  H.reserve(taus.size());
  for (const auto& tau : taus) {
    const SimulatedSample sample = simulate_reads(gene, tau, sim, sim_rng);
    H.push_back(generating_matrix(sample.reads, gene, flm).matrix);
  }

  Hyperparameters hyper;
  hyper.lambda.assign(J, cfg.lambda);
  hyper.a = cfg.a;
  hyper.b = cfg.b;
  ChainConfig chain = cfg.chain;
  chain.seed = derive_seed(cfg.seed, cell.gene_index, cell.replicate,
                           cell.scenario, cell.setting, 2);
  chain.keep_alpha_trace = false;
  const PosteriorSummary posterior = run_chain(H, hyper, chain);

  std::map<std::string, double> values;
  {
    const ReeDetail d = ree_detail(props.alpha, posterior.alpha_hat);
    values["msiq"] = d.value;
    out.skipped_zero += d.skipped_zero;
  }
  const auto add_em = [&](EstimatorKind kind) {
    const EstimateResult r = estimate(kind, H, cfg.em, true_e,
                                      posterior.theta_hat, cfg.threshold);
    const ReeDetail d = ree_detail(props.alpha, r.alpha_hat);
    values[estimator_name(kind)] = d.value;
    out.skipped_zero += d.skipped_zero;
  };
  add_em(EstimatorKind::Avg);
  add_em(EstimatorKind::AvgOracle);
  add_em(EstimatorKind::Pool);
  add_em(EstimatorKind::PoolOracle);
  add_em(EstimatorKind::MsiqA);
  add_em(EstimatorKind::MsiqP);

  for (const char* name : kEstimatorOrder)
    out.rows.push_back({gene.gene_id(), cell.scenario, cell.setting,
                        cell.replicate, name, values.at(name)});
  return out;
}

}  // namespace

ReeReport sweep(const std::vector<GeneModel>& genes, const SweepConfig& config) {
  if (genes.empty()) throw std::invalid_argument("sweep: empty gene corpus");
  if (config.replicates < 1)
    throw std::invalid_argument("sweep: replicates must be >= 1");
  for (int s : config.scenarios) ScenarioSpec::for_scenario(s, config.num_samples);
  for (int t : config.settings) LengthSetting::for_setting(t);

  std::vector<Cell> cells;
  for (std::size_t g = 0; g < genes.size(); ++g)
    for (int r = 0; r < config.replicates; ++r)
      for (int s : config.scenarios)
        for (int t : config.settings)
          cells.push_back({static_cast<int>(g), s, t, r});

  std::vector<CellOutcome> outcomes(cells.size());
  const auto worker = [&](std::atomic<std::size_t>& next) {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= cells.size()) return;
      try {
        outcomes[k] = run_cell(genes[cells[k].gene_index], cells[k], config);
      } catch (const std::exception& e) {
        outcomes[k].error = e.what();
      }
    }
  };
  const int width = std::max(1, config.workers);
  if (width == 1) {
    std::atomic<std::size_t> next{0};
    worker(next);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> threads;
    threads.reserve(width);
    for (int w = 0; w < width; ++w) threads.emplace_back(worker, std::ref(next));
    for (auto& t : threads) t.join();
  }

  // Merge in canonical cell order so output bytes never depend on scheduling.
  ReeReport report;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (!outcomes[k].error.empty()) {
      report.failures.push_back({genes[cells[k].gene_index].gene_id(),
                                 cells[k].scenario, cells[k].setting,
                                 cells[k].replicate, outcomes[k].error});
      continue;
    }
    report.zero_alpha_skips += outcomes[k].skipped_zero;
    for (ReeRow& row : outcomes[k].rows) report.rows.push_back(std::move(row));
  }
  report.aggregates = aggregate_rows(report.rows);
  return report;
}

}  // namespace msiq
