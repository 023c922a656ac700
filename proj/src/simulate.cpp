#include "msiq/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace msiq {

namespace {

void check_simplex(const std::vector<double>& v, const char* what) {
  if (v.empty()) throw std::invalid_argument(std::string(what) + ": empty vector");
  double sum = 0.0;
  for (double x : v) {
    if (x < 0.0) throw std::invalid_argument(std::string(what) + ": negative entry");
    sum += x;
  }
  if (std::fabs(sum - 1.0) > 1e-9)
    throw std::invalid_argument(std::string(what) + ": entries must sum to 1");
}

double sq_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += (a[j] - b[j]) * (a[j] - b[j]);
  return s;
}

// Genomic positions of the transcript-coordinate range [t_lo, t_hi] under an
// isoform, in increasing order.
std::vector<long> genomic_positions(const GeneModel& gene, const Isoform& iso,
                                    long t_lo, long t_hi) {
  std::vector<long> out;
  out.reserve(static_cast<std::size_t>(t_hi - t_lo + 1));
  long offset = 0;  // transcript coordinate of the subexon start, minus one
  for (int idx : iso.subexon_indices) {
    const GenomicInterval& sub = gene.subexons()[idx - 1];
    const long len = sub.length();
    const long lo = std::max(t_lo, offset + 1);
    const long hi = std::min(t_hi, offset + len);
    for (long t = lo; t <= hi; ++t) out.push_back(sub.start + (t - offset - 1));
    offset += len;
    if (offset >= t_hi) break;
  }
  return out;
}

}  // namespace

ScenarioSpec ScenarioSpec::for_scenario(int scenario_id, int num_samples) {
  if (scenario_id < 1 || scenario_id > 5)
    throw std::invalid_argument("ScenarioSpec: scenario must be 1..5");
  if (num_samples < 1)
    throw std::invalid_argument("ScenarioSpec: needs at least one sample");
  static const double kInformativeFraction[5] = {1.0, 0.5, 0.7, 0.7, 0.7};
  ScenarioSpec spec;
  spec.scenario_id = scenario_id;
  spec.num_samples = num_samples;
  spec.informative_count = std::max(
      1, static_cast<int>(std::lround(kInformativeFraction[scenario_id - 1] *
                                      num_samples)));
  return spec;
}

Proportions gen_proportions(int num_isoforms, Rng& rng) {
  if (num_isoforms < 1)
    throw std::invalid_argument("gen_proportions: needs at least one isoform");
  const std::vector<double> flat(static_cast<std::size_t>(num_isoforms), 1.0);
  Proportions p;
  p.alpha = rng.dirichlet(flat);
  p.betas.reserve(5);
  for (int k = 0; k < 5; ++k) p.betas.push_back(rng.dirichlet(flat));
  return p;
}

std::vector<std::vector<double>> make_scenario(
    const ScenarioSpec& spec, const std::vector<double>& alpha,
    const std::vector<std::vector<double>>& betas) {
  if (spec.scenario_id < 1 || spec.scenario_id > 5)
    throw std::invalid_argument("make_scenario: scenario must be 1..5");
  if (spec.informative_count < 1 || spec.informative_count > spec.num_samples)
    throw std::invalid_argument("make_scenario: bad informative count");
  if (betas.size() != 5)
    throw std::invalid_argument("make_scenario: needs exactly five betas");
  check_simplex(alpha, "make_scenario alpha");
  for (const auto& b : betas) check_simplex(b, "make_scenario beta");

  const int tail = spec.num_samples - spec.informative_count;
  std::vector<std::vector<double>> taus;
  taus.reserve(spec.num_samples);
  for (int d = 0; d < spec.informative_count; ++d) taus.push_back(alpha);

  switch (spec.scenario_id) {
    case 1:
      if (tail != 0)
        throw std::invalid_argument("make_scenario: scenario 1 is fully informative");
      break;
    case 2:
    case 3: {
      if (tail > 5)
        throw std::invalid_argument("make_scenario: more outliers than betas");
      for (int k = 0; k < tail; ++k) taus.push_back(betas[k]);
      break;
    }
    case 4:
    case 5: {
      std::size_t pick = 0;
      for (std::size_t k = 1; k < betas.size(); ++k) {
        const double dk = sq_distance(betas[k], alpha);
        const double dp = sq_distance(betas[pick], alpha);
        if (spec.scenario_id == 4 ? dk > dp : dk < dp) pick = k;
      }
      for (int k = 0; k < tail; ++k) taus.push_back(betas[pick]);
      break;
    }
  }
  return taus;
}

std::vector<int> true_informative(const ScenarioSpec& spec) {
  std::vector<int> e(spec.num_samples, 0);
  for (int d = 0; d < spec.informative_count; ++d) e[d] = 1;
  return e;
}

SimulatedSample simulate_reads(const GeneModel& gene,
                               const std::vector<double>& tau,
                               const SimConfig& config, Rng& rng) {
  if (static_cast<int>(tau.size()) != gene.num_isoforms())
    throw std::invalid_argument("simulate_reads: tau size must equal isoform count");
  check_simplex(tau, "simulate_reads tau");
  if (config.n_reads < 0 || config.read_len < 1 || !(config.frag_mean > 0.0) ||
      !(config.frag_sd > 0.0))
    throw std::invalid_argument("simulate_reads: bad configuration");
  if (config.strict) {
    bool any_long = false;
    for (int j = 1; j <= gene.num_isoforms(); ++j)
      any_long = any_long || gene.isoform_length(j) >= 2L * config.read_len;
    if (!any_long)
      throw std::invalid_argument("simulate_reads: every isoform of " +
                                  gene.gene_id() +
                                  " is shorter than one read pair");
  }

  SimulatedSample out;
  out.reads.reserve(config.n_reads);
  for (int r = 0; r < config.n_reads; ++r) {
    const int j = rng.categorical(tau) + 1;
    const long ell = gene.isoform_length(j);
    const double raw = rng.normal(config.frag_mean, config.frag_sd);
    long L;
    long c = config.read_len;
    if (ell < 2L * config.read_len) {
      if (config.strict)
        throw std::invalid_argument("simulate_reads: isoform shorter than one read pair");
      L = ell;  // full-transcript read with shortened ends
      c = std::max(1L, ell / 2);
      out.full_transcript_reads++;
    } else {
      L = std::clamp(static_cast<long>(std::llround(raw)),
                     2L * config.read_len, ell);
    }
    const long start = rng.uniform_int(1, ell - L + 1);
    const Isoform& iso = gene.isoforms()[j - 1];
    const std::vector<long> left =
        genomic_positions(gene, iso, start, start + c - 1);
    const std::vector<long> right =
        genomic_positions(gene, iso, start + L - c, start + L - 1);
    out.reads.push_back(summarize_read("r" + std::to_string(r + 1), left,
                                       right, gene));
    out.true_origins.push_back(j);
    out.fragment_lengths.push_back(L);
    out.normal_draws.push_back(raw);
  }
  return out;
}

GeneModel random_gene(const std::string& gene_id, const RandomGeneConfig& config,
                      Rng& rng) {
  if (config.min_subexons < 3 || config.max_subexons < config.min_subexons)
    throw std::invalid_argument("random_gene: needs at least three subexons");
  const int n =
      static_cast<int>(rng.uniform_int(config.min_subexons, config.max_subexons));
  std::vector<GenomicInterval> subexons;
  long pos = rng.uniform_int(1, 1000);
  for (int k = 0; k < n; ++k) {
    const long len = rng.uniform_int(config.min_exon_len, config.max_exon_len);
    subexons.push_back({pos, pos + len - 1});
    pos += len + rng.uniform_int(config.min_intron_len, config.max_intron_len);
  }

  // Distinct subexon subsets, always containing the first and last subexon.
  const long max_distinct = 1L << (n - 2);
  const int target = static_cast<int>(rng.uniform_int(
      std::min<long>(config.min_isoforms, max_distinct),
      std::min<long>(config.max_isoforms, max_distinct)));
  std::set<std::vector<int>> seen;
  int attempts = 0;
  while (static_cast<int>(seen.size()) < target && attempts < 64 * target) {
    std::vector<int> idx{1};
    for (int k = 2; k < n; ++k)
      if (rng.uniform01() < 0.5) idx.push_back(k);
    idx.push_back(n);
    seen.insert(std::move(idx));
    ++attempts;
  }
  if (seen.size() < 2) {
    seen.insert([&] {
      std::vector<int> idx(n);
      for (int k = 0; k < n; ++k) idx[k] = k + 1;
      return idx;
    }());
    seen.insert(std::vector<int>{1, n});
  }

  std::vector<Isoform> isoforms;
  int number = 1;
  for (const auto& idx : seen)
    isoforms.push_back({"iso" + std::to_string(number++), idx});
  return GeneModel(gene_id, std::move(subexons), std::move(isoforms));
}

}  // namespace msiq
