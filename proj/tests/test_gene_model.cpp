#include "msiq/gene_model.hpp"

#include <algorithm>
#include <set>

#include "doctest.h"
#include "msiq/errors.hpp"
#include "msiq/rng.hpp"

using namespace msiq;

namespace {

// The three-isoform gene whose splice sites cut the two exons into four
// subexons.
std::vector<ExonIsoform> three_isoform_annotation() {
  return {
      {"iso1", {{1, 100}, {201, 300}}},
      {"iso2", {{1, 50}, {201, 300}}},
      {"iso3", {{1, 100}, {251, 300}}},
  };
}

std::set<long> positions_of(const std::vector<GenomicInterval>& ivs) {
  std::set<long> out;
  for (const GenomicInterval& iv : ivs)
    for (long p = iv.start; p <= iv.end; ++p) out.insert(p);
  return out;
}

// Maximal intervals of the isoform reconstructed from its subexon indices.
std::vector<GenomicInterval> reconstruct(const GeneModel& gene,
                                         const Isoform& iso) {
  std::vector<GenomicInterval> out;
  for (int idx : iso.subexon_indices) {
    const GenomicInterval& sub = gene.subexons()[idx - 1];
    if (!out.empty() && out.back().end + 1 == sub.start)
      out.back().end = sub.end;
    else
      out.push_back(sub);
  }
  return out;
}

}  // namespace

TEST_CASE("derive_subexons splits the three-isoform gene into four subexons") {
  const GeneModel gene = derive_subexons("g", three_isoform_annotation());
  const std::vector<GenomicInterval> expect = {
      {1, 50}, {51, 100}, {201, 250}, {251, 300}};
  CHECK(gene.subexons() == expect);
  CHECK(gene.isoforms()[0].subexon_indices == std::vector<int>{1, 2, 3, 4});
  CHECK(gene.isoforms()[1].subexon_indices == std::vector<int>{1, 3, 4});
  CHECK(gene.isoforms()[2].subexon_indices == std::vector<int>{1, 2, 4});
}

TEST_CASE("derive_subexons degenerate genes") {
  SUBCASE("single isoform keeps its single interval") {
    const GeneModel gene = derive_subexons("g", {{"iso1", {{10, 90}}}});
    CHECK(gene.subexons() == std::vector<GenomicInterval>{{10, 90}});
    CHECK(gene.isoforms()[0].subexon_indices == std::vector<int>{1});
    CHECK(gene.isoform_length(1) == 81);
  }
  SUBCASE("duplicate isoforms share one subexon") {
    const GeneModel gene =
        derive_subexons("g", {{"a", {{1, 100}}}, {"b", {{1, 100}}}});
    CHECK(gene.num_subexons() == 1);
    CHECK(gene.isoforms()[0].subexon_indices == std::vector<int>{1});
    CHECK(gene.isoforms()[1].subexon_indices == std::vector<int>{1});
  }
}

TEST_CASE("derive_subexons rejects malformed annotations") {
  CHECK_THROWS_AS(derive_subexons("g", {}), std::invalid_argument);
  CHECK_THROWS_AS(derive_subexons("g", {{"iso1", {}}}), std::invalid_argument);
  CHECK_THROWS_AS(derive_subexons("g", {{"iso1", {{90, 10}}}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(derive_subexons("g", {{"iso1", {{1, 100}, {50, 200}}}}),
                  std::invalid_argument);
}

TEST_CASE("isoform_length on the four-subexon fixture") {
  const GeneModel gene = derive_subexons("g", three_isoform_annotation());
  CHECK(gene.isoform_length(2) == 50 + 50 + 50);  // iso2 = {1,3,4}
  CHECK_THROWS_AS(gene.isoform_length(0), std::invalid_argument);
  CHECK_THROWS_AS(gene.isoform_length(4), std::invalid_argument);
}

TEST_CASE("isoform_length of the paired-end fixture gene") {
  const GeneModel gene("g",
                       {{1, 300}, {350, 400}, {450, 500}, {510, 600}},
                       {{"iso1", {1, 2, 4}}, {"iso2", {1, 2, 3, 4}}});
  CHECK(gene.isoform_length(1) == 442);
  CHECK(gene.isoform_length(2) == 493);
}

TEST_CASE("effective_length clamps at one") {
  CHECK(effective_length(1000, 250.0) == 750);
  CHECK(effective_length(200, 250.0) == 1);
  CHECK(effective_length(442, 200.0) == 242);
  CHECK_THROWS_AS(effective_length(0, 100.0), std::invalid_argument);
  CHECK_THROWS_AS(effective_length(100, 0.5), std::invalid_argument);
}

TEST_CASE("derived subexons partition the input positions and round-trip") {
  Rng rng(20240811);
  for (int trial = 0; trial < 50; ++trial) {
    // Random annotation: isoforms pick intervals between shared boundaries.
    const int n_bounds = static_cast<int>(rng.uniform_int(3, 6));
    std::vector<long> bounds;
    long pos = 1;
    for (int k = 0; k < n_bounds; ++k) {
      bounds.push_back(pos);
      pos += rng.uniform_int(5, 40);
    }
    bounds.push_back(pos);
    const int n_iso = static_cast<int>(rng.uniform_int(1, 4));
    std::vector<ExonIsoform> annotation;
    for (int k = 0; k < n_iso; ++k) {
      ExonIsoform iso;
      iso.isoform_id = "iso" + std::to_string(k + 1);
      for (int b = 0; b + 1 < static_cast<int>(bounds.size()); ++b)
        if (rng.uniform01() < 0.6)
          iso.exons.push_back({bounds[b], bounds[b + 1] - 1});
      if (iso.exons.empty()) iso.exons.push_back({bounds[0], bounds[1] - 1});
      annotation.push_back(std::move(iso));
    }

    const GeneModel gene = derive_subexons("g", annotation);

    // pairwise disjoint and sorted
    for (int k = 1; k < gene.num_subexons(); ++k)
      CHECK(gene.subexons()[k].start > gene.subexons()[k - 1].end);

    // union of subexons equals union of all input intervals
    std::set<long> input_union;
    for (const auto& iso : annotation)
      for (long p : positions_of(iso.exons)) input_union.insert(p);
    CHECK(positions_of(gene.subexons()) == input_union);

    for (int k = 0; k < n_iso; ++k) {
      // round-trip: reconstruction equals the merged input intervals
      std::vector<GenomicInterval> merged;
      std::vector<GenomicInterval> sorted = annotation[k].exons;
      std::sort(sorted.begin(), sorted.end(),
                [](const GenomicInterval& x, const GenomicInterval& y) {
                  return x.start < y.start;
                });
      for (const GenomicInterval& iv : sorted) {
        if (!merged.empty() && merged.back().end + 1 == iv.start)
          merged.back().end = iv.end;
        else
          merged.push_back(iv);
      }
      CHECK(reconstruct(gene, gene.isoforms()[k]) == merged);

      // isoform_length equals the brute-force position count
      CHECK(gene.isoform_length(k + 1) ==
            static_cast<long>(positions_of(annotation[k].exons).size()));
    }
  }
}
