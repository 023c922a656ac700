#pragma once

#include <string>
#include <vector>

namespace msiq {

/// Closed genomic interval, 1-based inclusive on both ends.
struct GenomicInterval {
  long start = 0;
  long end = 0;

  long length() const { return end - start + 1; }
  bool contains(long pos) const { return pos >= start && pos <= end; }
  bool operator==(const GenomicInterval&) const = default;
};

/// An isoform as an ordered selection of whole subexons (1-based indices,
/// strictly increasing).
struct Isoform {
  std::string isoform_id;
  std::vector<int> subexon_indices;
};

/// An isoform given at annotation level, as exon intervals.
struct ExonIsoform {
  std::string isoform_id;
  std::vector<GenomicInterval> exons;
};

/// A gene as non-overlapping, sorted subexons plus its annotated isoforms.
/// Immutable after construction; invariants are checked by the constructor.
class GeneModel {
 public:
  GeneModel(std::string gene_id, std::vector<GenomicInterval> subexons,
            std::vector<Isoform> isoforms);

  const std::string& gene_id() const { return gene_id_; }
  const std::vector<GenomicInterval>& subexons() const { return subexons_; }
  const std::vector<Isoform>& isoforms() const { return isoforms_; }
  int num_subexons() const { return static_cast<int>(subexons_.size()); }
  int num_isoforms() const { return static_cast<int>(isoforms_.size()); }

  /// Length in bp of isoform j (1-based), the sum of its subexon lengths.
  long isoform_length(int j) const;

  /// Index (1-based) of the subexon containing the genomic position, or 0.
  int subexon_containing(long pos) const;

 private:
  std::string gene_id_;
  std::vector<GenomicInterval> subexons_;
  std::vector<Isoform> isoforms_;
};

/// Splits exon-level isoform annotations at every splice boundary and returns
/// the gene re-expressed over the resulting subexons. Every input isoform
/// becomes a union of whole subexons; inputs violating that are rejected.
GeneModel derive_subexons(std::string gene_id,
                          const std::vector<ExonIsoform>& isoforms);

/// Number of possible fragment start positions on an isoform of length
/// `isoform_len` given the mean fragment length; clamped to at least 1 so
/// downstream divisions stay defined for short isoforms.
long effective_length(long isoform_len, double mean_frag);

}  // namespace msiq
