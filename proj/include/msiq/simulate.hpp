#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "msiq/gene_model.hpp"
#include "msiq/read_model.hpp"
#include "msiq/rng.hpp"

namespace msiq {

/// One of the five sample-heterogeneity scenarios: how many of the D samples
/// share the informative-group proportions and what the rest get.
struct ScenarioSpec {
  int scenario_id = 1;
  int num_samples = 10;
  int informative_count = 10;

  /// Standard spec for a scenario: informative counts 10, 5, 7, 7, 7 at
  /// D = 10, scaled proportionally for other sample counts.
  static ScenarioSpec for_scenario(int scenario_id, int num_samples = 10);
};

struct SimConfig {
  int n_reads = 500;
  double frag_mean = 250.0;
  double frag_sd = 10.0;
  int read_len = 100;
  bool strict = false;  // error out instead of flagging short transcripts
};

struct Proportions {
  std::vector<double> alpha;
  std::vector<std::vector<double>> betas;  // five draws
};

/// Informative-group proportions plus five alternates, all flat-Dirichlet.
Proportions gen_proportions(int num_isoforms, Rng& rng);

/// Per-sample proportion vectors for the scenario. Samples after the
/// informative block get individual betas (scenarios 2-3) or the beta
/// farthest from / closest to alpha in squared L2 (scenarios 4-5).
std::vector<std::vector<double>> make_scenario(
    const ScenarioSpec& spec, const std::vector<double>& alpha,
    const std::vector<std::vector<double>>& betas);

/// Indicator vector of the samples make_scenario assigns to the informative
/// group (the leading block).
std::vector<int> true_informative(const ScenarioSpec& spec);

struct SimulatedSample {
  std::vector<SummarizedRead> reads;
  std::vector<int> true_origins;       // 1-based isoform indices
  std::vector<long> fragment_lengths;  // after rounding and clamping
  std::vector<double> normal_draws;    // raw Gaussian draws before rounding
  int full_transcript_reads = 0;       // reads flagged ell_j < 2 * read_len
};

/// Draws paired-end reads: isoform by tau, fragment length by a rounded
/// Gaussian clamped into [2 * read_len, ell_j], start uniform in transcript
/// coordinates; ends are mapped back to genomic positions and summarized.
/// Transcripts shorter than 2 * read_len yield full-transcript reads with a
/// shortened end length (flagged), or an error in strict mode.
SimulatedSample simulate_reads(const GeneModel& gene,
                               const std::vector<double>& tau,
                               const SimConfig& config, Rng& rng);

struct RandomGeneConfig {
  int min_subexons = 3;
  int max_subexons = 10;
  long min_exon_len = 50;
  long max_exon_len = 300;
  long min_intron_len = 30;
  long max_intron_len = 150;
  int min_isoforms = 2;
  int max_isoforms = 8;
};

/// Random multi-isoform gene: subexons with intron gaps, isoforms as random
/// subexon subsets that always include the first and last subexon,
/// deduplicated.
GeneModel random_gene(const std::string& gene_id, const RandomGeneConfig& config,
                      Rng& rng);

}  // namespace msiq
