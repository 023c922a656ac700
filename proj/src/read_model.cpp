#include "msiq/read_model.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "msiq/errors.hpp"

namespace msiq {

GeneratingMatrix::GeneratingMatrix(int cols) : rows_(0), cols_(cols) {
  if (cols < 1)
    throw std::invalid_argument("GeneratingMatrix: needs at least one column");
}

GeneratingMatrix::GeneratingMatrix(std::vector<std::vector<double>> rows) {
  if (rows.empty())
    throw std::invalid_argument("GeneratingMatrix: no rows; use the column-count constructor");
  rows_ = static_cast<int>(rows.size());
  cols_ = static_cast<int>(rows.front().size());
  if (cols_ < 1)
    throw std::invalid_argument("GeneratingMatrix: needs at least one column");
  values_.reserve(static_cast<std::size_t>(rows_) * cols_);
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != cols_)
      throw std::invalid_argument("GeneratingMatrix: ragged rows");
    bool positive = false;
    for (double v : r) {
      if (v < 0.0 || !std::isfinite(v))
        throw std::invalid_argument("GeneratingMatrix: invalid entry");
      positive = positive || v > 0.0;
    }
    if (!positive)
      throw std::invalid_argument("GeneratingMatrix: row with no positive entry");
    values_.insert(values_.end(), r.begin(), r.end());
  }
}

namespace {

void check_positions(const std::vector<long>& positions, const char* which) {
  if (positions.empty())
    throw std::invalid_argument(std::string("summarize_read: empty ") + which +
                                " position list");
  for (std::size_t k = 1; k < positions.size(); ++k)
    if (positions[k] <= positions[k - 1])
      throw std::invalid_argument(std::string("summarize_read: ") + which +
                                  " positions not strictly increasing");
}

std::vector<int> overlapped_subexons(const std::vector<long>& positions,
                                     const GeneModel& gene,
                                     const std::string& read_id) {
  std::vector<int> out;
  for (long pos : positions) {
    const int idx = gene.subexon_containing(pos);
    if (idx == 0)
      throw UnmappablePositionError("read " + read_id + ": position " +
                                    std::to_string(pos) +
                                    " falls in no subexon of " + gene.gene_id());
    if (out.empty() || out.back() != idx) out.push_back(idx);
  }
  return out;  // sorted since positions are increasing and subexons sorted
}

// Transcript coordinate (1-based) of a genomic position under an isoform, or
// nullopt when the position is not on the isoform.
std::optional<long> transcript_coord(const GeneModel& gene, const Isoform& iso,
                                     long pos) {
  long before = 0;
  for (int idx : iso.subexon_indices) {
    const GenomicInterval& sub = gene.subexons()[idx - 1];
    if (sub.contains(pos)) return before + (pos - sub.start) + 1;
    before += sub.length();
  }
  return std::nullopt;
}

// One read end is consistent with the isoform when the isoform's subexons
// intersecting [y_start, y_end] are exactly the end's overlap set; the end
// then maps to one contiguous transcript block and covers no foreign subexon.
bool end_consistent(const GeneModel& gene, const Isoform& iso,
                    const std::vector<int>& s, long y_start, long y_end) {
  std::vector<int> visited;
  for (int idx : iso.subexon_indices) {
    const GenomicInterval& sub = gene.subexons()[idx - 1];
    if (sub.start <= y_end && sub.end >= y_start) visited.push_back(idx);
  }
  return visited == s;
}

bool is_compatible(const SummarizedRead& read, const GeneModel& gene, int j) {
  const Isoform& iso = gene.isoforms()[j - 1];
  const auto member = [&](int idx) {
    return std::find(iso.subexon_indices.begin(), iso.subexon_indices.end(),
                     idx) != iso.subexon_indices.end();
  };
  for (int idx : read.s1)
    if (!member(idx)) return false;
  for (int idx : read.s2)
    if (!member(idx)) return false;
  if (!end_consistent(gene, iso, read.s1, read.y_first, read.y_left_last))
    return false;
  if (!end_consistent(gene, iso, read.s2, read.y_right_first, read.y_last))
    return false;
  const auto t_first = transcript_coord(gene, iso, read.y_first);
  const auto t_last = transcript_coord(gene, iso, read.y_last);
  if (!t_first || !t_last || *t_last < *t_first) return false;
  return true;
}

}  // namespace

SummarizedRead summarize_read(std::string read_id,
                              const std::vector<long>& covered_left,
                              const std::vector<long>& covered_right,
                              const GeneModel& gene) {
  check_positions(covered_left, "left");
  check_positions(covered_right, "right");
  if (covered_left.back() > covered_right.front())
    throw std::invalid_argument("summarize_read: left end must precede right end");

  SummarizedRead read;
  read.read_id = std::move(read_id);
  read.s1 = overlapped_subexons(covered_left, gene, read.read_id);
  read.s2 = overlapped_subexons(covered_right, gene, read.read_id);
  read.y_first = covered_left.front();
  read.y_left_last = covered_left.back();
  read.y_right_first = covered_right.front();
  read.y_last = covered_right.back();
  read.half_length = static_cast<int>(covered_left.size());
  return read;
}

std::vector<int> compatible_isoforms(const SummarizedRead& read,
                                     const GeneModel& gene) {
  std::vector<int> out;
  for (int j = 1; j <= gene.num_isoforms(); ++j)
    if (is_compatible(read, gene, j)) out.push_back(j);
  return out;
}

long fragment_length(const SummarizedRead& read, int j, const GeneModel& gene) {
  if (j < 1 || j > gene.num_isoforms())
    throw std::invalid_argument("fragment_length: isoform index out of range");
  if (!is_compatible(read, gene, j))
    throw IncompatibleReadError("fragment_length: read " + read.read_id +
                                " is incompatible with isoform " +
                                gene.isoforms()[j - 1].isoform_id);
  const Isoform& iso = gene.isoforms()[j - 1];
  const long t_first = *transcript_coord(gene, iso, read.y_first);
  const long t_last = *transcript_coord(gene, iso, read.y_last);
  return t_last - t_first + 1;
}

double gaussian_density(double x, double mean, double sd) {
  const double z = (x - mean) / sd;
  return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * M_PI));
}

GeneratingMatrixResult generating_matrix(
    const std::vector<SummarizedRead>& reads, const GeneModel& gene,
    const FragmentLengthModel& flm) {
  if (!(flm.mean > 0.0) || !(flm.sd > 0.0))
    throw std::invalid_argument("generating_matrix: fragment model needs mean > 0 and sd > 0");
  const int J = gene.num_isoforms();

  std::vector<std::vector<double>> kept;
  std::vector<std::string> dropped;
  std::vector<int> kept_rows;
  for (std::size_t i = 0; i < reads.size(); ++i) {
    std::vector<double> row(J, 0.0);
    bool any = false;
    for (int j : compatible_isoforms(reads[i], gene)) {
      const long L = fragment_length(reads[i], j, gene);
      const long eff = effective_length(gene.isoform_length(j), flm.mean);
      const double h =
          gaussian_density(static_cast<double>(L), flm.mean, flm.sd) /
          static_cast<double>(eff);
      row[j - 1] = h;
      any = any || h > 0.0;
    }
    if (any) {
      kept.push_back(std::move(row));
      kept_rows.push_back(static_cast<int>(i));
    } else {
      dropped.push_back(reads[i].read_id);
    }
  }
  if (kept.empty())
    throw NoUsableReadsError("generating_matrix: no usable reads for gene " +
                             gene.gene_id());
  return {GeneratingMatrix(std::move(kept)), std::move(dropped),
          std::move(kept_rows)};
}

FragmentLengthModel estimate_fragment_params(
    const std::vector<std::pair<SummarizedRead, GeneModel>>& single_isoform_reads) {
  if (single_isoform_reads.size() < 2)
    throw std::invalid_argument(
        "estimate_fragment_params: needs at least 2 reads");
  std::vector<double> lengths;
  lengths.reserve(single_isoform_reads.size());
  for (const auto& [read, gene] : single_isoform_reads) {
    if (gene.num_isoforms() != 1)
      throw std::invalid_argument("estimate_fragment_params: gene " +
                                  gene.gene_id() + " has more than one isoform");
    lengths.push_back(static_cast<double>(fragment_length(read, 1, gene)));
  }
  double mean = 0.0;
  for (double v : lengths) mean += v;
  mean /= static_cast<double>(lengths.size());
  double ss = 0.0;
  for (double v : lengths) ss += (v - mean) * (v - mean);
  double sd = std::sqrt(ss / static_cast<double>(lengths.size() - 1));
  return {mean, std::max(sd, 1.0)};
}

}  // namespace msiq
