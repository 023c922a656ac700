#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "msiq/evaluate.hpp"
#include "msiq/gene_model.hpp"
#include "msiq/gibbs.hpp"
#include "msiq/read_model.hpp"

namespace msiq {

inline constexpr const char* kVersion = "0.1.0";

/// Provenance object embedded in every output file: the tool, subcommand and
/// the fully resolved configuration (including the seed), so re-running with
/// the same header reproduces the file byte for byte.
nlohmann::json make_provenance(const std::string& subcommand,
                               const nlohmann::json& config);

/// Gene annotation JSON. Accepts the exon-level form
///   {"gene_id", "isoforms": [{"isoform_id", "exons": [[start, end], ...]}]}
/// (run through subexon derivation) and the derived form
///   {"gene_id", "subexons": [[start, end], ...],
///    "isoforms": [{"isoform_id", "subexon_indices": [...]}]}.
/// A file may hold a single gene object, an array, or {"genes": [...]}.
std::vector<GeneModel> load_annotation(const std::string& path);
GeneModel gene_from_json(const nlohmann::json& j);
nlohmann::json gene_to_json(const GeneModel& gene);
void save_annotation(const std::string& path, const std::vector<GeneModel>& genes,
                     const nlohmann::json& provenance);

/// Summarized read TSV (canonical interchange form), one row per read:
///   read_id  s1  s2  y_first  y_left_last  y_right_first  y_last
/// with index sets comma-joined. The raw form
///   read_id  left_intervals  right_intervals
/// with intervals as "a-b,c-d" is also accepted and summarized on load.
void save_reads_tsv(const std::string& path,
                    const std::vector<SummarizedRead>& reads,
                    const nlohmann::json& provenance);
std::vector<SummarizedRead> load_reads_tsv(const std::string& path,
                                           const GeneModel& gene);

/// Per-gene simulation truth.
struct GeneTruth {
  std::string gene_id;
  std::vector<double> alpha;
  std::vector<std::vector<double>> per_sample_tau;
  std::vector<int> true_E;
  std::vector<std::vector<int>> true_origins;  // 1-based, per sample
};
void save_truth(const std::string& path, const std::vector<GeneTruth>& truths,
                const nlohmann::json& provenance);
std::vector<GeneTruth> load_truth(const std::string& path);

/// Chain result JSON for one gene.
nlohmann::json chain_result_json(const std::string& gene_id,
                                 const PosteriorSummary& posterior,
                                 long dropped_reads,
                                 const nlohmann::json& provenance);

/// EM-estimator report JSON for one gene.
nlohmann::json estimator_report_json(const std::string& gene_id,
                                     const std::string& kind,
                                     const EstimateResult& result,
                                     const nlohmann::json& provenance);

/// REE report TSV plus aggregate JSON.
void save_ree_report_tsv(const std::string& path, const std::vector<ReeRow>& rows,
                         const nlohmann::json& provenance);
nlohmann::json ree_aggregates_json(const ReeReport& report,
                                   const nlohmann::json& provenance);

void write_json_file(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

/// Shortest round-trip decimal representation, used in TSV output.
std::string format_double(double v);

}  // namespace msiq
