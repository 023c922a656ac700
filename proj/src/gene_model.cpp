#include "msiq/gene_model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "msiq/errors.hpp"

namespace msiq {

GeneModel::GeneModel(std::string gene_id, std::vector<GenomicInterval> subexons,
                     std::vector<Isoform> isoforms)
    : gene_id_(std::move(gene_id)),
      subexons_(std::move(subexons)),
      isoforms_(std::move(isoforms)) {
  if (subexons_.empty())
    throw std::invalid_argument("GeneModel: no subexons");
  for (std::size_t k = 0; k < subexons_.size(); ++k) {
    if (subexons_[k].start > subexons_[k].end)
      throw std::invalid_argument("GeneModel: subexon with start > end");
    if (k > 0 && subexons_[k].start <= subexons_[k - 1].end)
      throw std::invalid_argument("GeneModel: subexons overlap or are unsorted");
  }
  if (isoforms_.empty())
    throw std::invalid_argument("GeneModel: gene needs at least one isoform");
  const int n = num_subexons();
  for (const Isoform& iso : isoforms_) {
    if (iso.subexon_indices.empty())
      throw std::invalid_argument("GeneModel: empty isoform " + iso.isoform_id);
    int prev = 0;
    for (int idx : iso.subexon_indices) {
      if (idx < 1 || idx > n)
        throw std::invalid_argument("GeneModel: subexon index out of range in " +
                                    iso.isoform_id);
      if (idx <= prev)
        throw std::invalid_argument(
            "GeneModel: subexon indices not strictly increasing in " +
            iso.isoform_id);
      prev = idx;
    }
  }
}

long GeneModel::isoform_length(int j) const {
  if (j < 1 || j > num_isoforms())
    throw std::invalid_argument("isoform_length: isoform index out of range");
  long total = 0;
  for (int idx : isoforms_[j - 1].subexon_indices)
    total += subexons_[idx - 1].length();
  return total;
}

int GeneModel::subexon_containing(long pos) const {
  // First subexon whose end is >= pos; it contains pos iff its start is <= pos.
  auto it = std::lower_bound(
      subexons_.begin(), subexons_.end(), pos,
      [](const GenomicInterval& iv, long p) { return iv.end < p; });
  if (it == subexons_.end() || it->start > pos) return 0;
  return static_cast<int>(it - subexons_.begin()) + 1;
}

namespace {

// Sorted copy with overlaps rejected and touching intervals merged.
std::vector<GenomicInterval> canonicalize(const ExonIsoform& iso) {
  if (iso.exons.empty())
    throw std::invalid_argument("derive_subexons: isoform " + iso.isoform_id +
                                " has no exons");
  std::vector<GenomicInterval> ivs = iso.exons;
  for (const GenomicInterval& iv : ivs)
    if (iv.start > iv.end)
      throw std::invalid_argument("derive_subexons: interval with start > end in " +
                                  iso.isoform_id);
  std::sort(ivs.begin(), ivs.end(),
            [](const GenomicInterval& a, const GenomicInterval& b) {
              return a.start < b.start;
            });
  std::vector<GenomicInterval> merged;
  for (const GenomicInterval& iv : ivs) {
    if (!merged.empty() && iv.start <= merged.back().end)
      throw std::invalid_argument(
          "derive_subexons: overlapping intervals within isoform " +
          iso.isoform_id);
    if (!merged.empty() && iv.start == merged.back().end + 1)
      merged.back().end = iv.end;
    else
      merged.push_back(iv);
  }
  return merged;
}

}  // namespace

GeneModel derive_subexons(std::string gene_id,
                          const std::vector<ExonIsoform>& isoforms) {
  if (isoforms.empty())
    throw std::invalid_argument("derive_subexons: no isoforms given");

  std::vector<std::vector<GenomicInterval>> canon;
  canon.reserve(isoforms.size());
  for (const ExonIsoform& iso : isoforms) canon.push_back(canonicalize(iso));

  // Split points: every interval start and one-past-end across all isoforms.
  std::set<long> cuts;
  std::vector<GenomicInterval> all;
  for (const auto& ivs : canon)
    for (const GenomicInterval& iv : ivs) {
      cuts.insert(iv.start);
      cuts.insert(iv.end + 1);
      all.push_back(iv);
    }

  // Union of coverage across isoforms.
  std::sort(all.begin(), all.end(),
            [](const GenomicInterval& a, const GenomicInterval& b) {
              return a.start < b.start;
            });
  std::vector<GenomicInterval> covered;
  for (const GenomicInterval& iv : all) {
    if (!covered.empty() && iv.start <= covered.back().end + 1)
      covered.back().end = std::max(covered.back().end, iv.end);
    else
      covered.push_back(iv);
  }

  // Subexons: covered regions split at every interior cut point.
  std::vector<GenomicInterval> subexons;
  for (const GenomicInterval& region : covered) {
    long pos = region.start;
    auto it = cuts.upper_bound(pos);
    while (pos <= region.end) {
      const long next =
          (it != cuts.end() && *it <= region.end) ? *it : region.end + 1;
      subexons.push_back({pos, next - 1});
      pos = next;
      if (it != cuts.end()) ++it;
    }
  }

  // Re-express each isoform as subexon indices. By construction every
  // interval should tile exactly; anything else is a malformed annotation.
  std::vector<Isoform> out;
  out.reserve(isoforms.size());
  for (std::size_t k = 0; k < isoforms.size(); ++k) {
    Isoform iso;
    iso.isoform_id = isoforms[k].isoform_id;
    for (const GenomicInterval& iv : canon[k]) {
      auto it = std::lower_bound(
          subexons.begin(), subexons.end(), iv.start,
          [](const GenomicInterval& s, long p) { return s.start < p; });
      if (it == subexons.end() || it->start != iv.start)
        throw MalformedAnnotationError(
            "derive_subexons: interval of " + iso.isoform_id +
            " is not a union of whole subexons");
      long expect = iv.start;
      while (expect <= iv.end) {
        if (it == subexons.end() || it->start != expect || it->end > iv.end)
          throw MalformedAnnotationError(
              "derive_subexons: interval of " + iso.isoform_id +
              " is not a union of whole subexons");
        iso.subexon_indices.push_back(
            static_cast<int>(it - subexons.begin()) + 1);
        expect = it->end + 1;
        ++it;
      }
    }
    out.push_back(std::move(iso));
  }

  return GeneModel(std::move(gene_id), std::move(subexons), std::move(out));
}

long effective_length(long isoform_len, double mean_frag) {
  if (isoform_len < 1)
    throw std::invalid_argument("effective_length: isoform length must be >= 1");
  if (mean_frag < 1.0)
    throw std::invalid_argument("effective_length: mean fragment must be >= 1");
  return std::max<long>(isoform_len - std::llround(mean_frag), 1);
}

}  // namespace msiq
