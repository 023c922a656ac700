#pragma once

#include <string>
#include <vector>

#include "msiq/gene_model.hpp"

namespace msiq {

/// A paired-end read summarized against a gene: the subexon index sets
/// overlapped by each end plus the four boundary genomic positions
/// (first/last covered position of the left and right ends).
struct SummarizedRead {
  std::string read_id;
  std::vector<int> s1;  // sorted 1-based subexon indices, left end
  std::vector<int> s2;  // sorted 1-based subexon indices, right end
  long y_first = 0;
  long y_left_last = 0;
  long y_right_first = 0;
  long y_last = 0;
  int half_length = 0;  // read end length c in bp
};

/// Gaussian fragment-length model; parameters in bp.
struct FragmentLengthModel {
  double mean = 0.0;
  double sd = 0.0;
};

/// Dense n x J matrix of read-generation probabilities. Rows are reads,
/// columns are isoforms (column j-1 holds isoform j). Entries are zero
/// exactly for incompatible pairs; a constructed matrix never contains an
/// all-zero row.
class GeneratingMatrix {
 public:
  /// Empty matrix with a fixed column count (a sample with no reads).
  explicit GeneratingMatrix(int cols);
  /// Builds from row vectors; every row must have a positive entry and no
  /// entry may be negative.
  explicit GeneratingMatrix(std::vector<std::vector<double>> rows);

  double operator()(int i, int j) const { return values_[i * cols_ + j]; }
  const double* row(int i) const { return values_.data() + i * cols_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> values_;
};

/// Result of assembling a generating matrix: reads whose row would be
/// all-zero (incompatible with every isoform) are dropped and reported.
struct GeneratingMatrixResult {
  GeneratingMatrix matrix;
  std::vector<std::string> dropped_read_ids;
  std::vector<int> kept_rows;  // indices into the input read list
};

/// Summarizes one aligned paired-end read from the genomic positions covered
/// by each end (sorted, strictly increasing; the left list precedes the
/// right one). Positions outside every subexon raise UnmappablePositionError.
SummarizedRead summarize_read(std::string read_id,
                              const std::vector<long>& covered_left,
                              const std::vector<long>& covered_right,
                              const GeneModel& gene);

/// Isoforms (1-based, sorted) the read can originate from. An isoform
/// qualifies when both ends cover exactly the isoform's subexons inside their
/// spans, each end maps to a contiguous transcript block, and the implied
/// fragment lies within the isoform.
std::vector<int> compatible_isoforms(const SummarizedRead& read,
                                     const GeneModel& gene);

/// Fragment length of the read under isoform j (1-based): the transcript
/// coordinate span from the first to the last covered position.
long fragment_length(const SummarizedRead& read, int j, const GeneModel& gene);

/// h[i][j] = gaussian(fragment length under j) / effective isoform length for
/// compatible pairs, 0 otherwise; all-zero rows are dropped and reported.
GeneratingMatrixResult generating_matrix(
    const std::vector<SummarizedRead>& reads, const GeneModel& gene,
    const FragmentLengthModel& flm);

/// Fits the fragment-length model from reads of single-isoform genes, whose
/// fragment lengths are uniquely determined. Sample mean and n-1 standard
/// deviation; the sd is floored at 1 bp.
FragmentLengthModel estimate_fragment_params(
    const std::vector<std::pair<SummarizedRead, GeneModel>>& single_isoform_reads);

/// Gaussian density, evaluated at an integer fragment length.
double gaussian_density(double x, double mean, double sd);

}  // namespace msiq
