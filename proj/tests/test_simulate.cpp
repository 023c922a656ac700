#include "msiq/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"

using namespace msiq;

namespace {

GeneModel fixture_gene() {
  return GeneModel("g",
                   {{1, 300}, {350, 400}, {450, 500}, {510, 600}},
                   {{"iso1", {1, 2, 4}}, {"iso2", {1, 2, 3, 4}}});
}

double normal_cdf(double x, double mean, double sd) {
  return 0.5 * std::erfc(-(x - mean) / (sd * std::sqrt(2.0)));
}

}  // namespace

TEST_CASE("gen_proportions") {
  Rng rng(1);
  SUBCASE("single isoform is degenerate") {
    const Proportions p = gen_proportions(1, rng);
    CHECK(p.alpha == std::vector<double>{1.0});
    for (const auto& b : p.betas) CHECK(b == std::vector<double>{1.0});
  }
  SUBCASE("every draw lies on the simplex") {
    for (int trial = 0; trial < 200; ++trial) {
      const Proportions p = gen_proportions(4, rng);
      double sum = 0.0;
      for (double v : p.alpha) sum += v;
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  SUBCASE("flat Dirichlet has a uniform mean") {
    std::vector<double> mean(3, 0.0);
    const int n = 100000;
    for (int k = 0; k < n; ++k) {
      const Proportions p = gen_proportions(3, rng);
      for (int j = 0; j < 3; ++j) mean[j] += p.alpha[j];
    }
    for (int j = 0; j < 3; ++j)
      CHECK(mean[j] / n == doctest::Approx(1.0 / 3.0).epsilon(0.0075));
  }
}

TEST_CASE("make_scenario lays out the five designs") {
  const std::vector<double> alpha{1.0, 0.0};
  // betas at chosen squared distances from alpha
  const std::vector<double> dist{0.1, 0.9, 0.5, 0.2, 0.3};
  std::vector<std::vector<double>> betas;
  for (double d : dist) {
    const double off = d / std::sqrt(2.0);
    betas.push_back({1.0 - off, off});  // squared distance d^2
  }

  SUBCASE("scenario 1: every sample is informative") {
    const auto taus =
        make_scenario(ScenarioSpec::for_scenario(1), alpha, betas);
    CHECK(taus.size() == 10);
    for (const auto& tau : taus) CHECK(tau == alpha);
    CHECK(true_informative(ScenarioSpec::for_scenario(1)) ==
          std::vector<int>(10, 1));
  }
  SUBCASE("scenario 2: five informative plus the five betas") {
    const auto taus =
        make_scenario(ScenarioSpec::for_scenario(2), alpha, betas);
    for (int d = 0; d < 5; ++d) CHECK(taus[d] == alpha);
    for (int d = 5; d < 10; ++d) CHECK(taus[d] == betas[d - 5]);
  }
  SUBCASE("scenario 3: seven informative plus the first three betas") {
    const auto taus =
        make_scenario(ScenarioSpec::for_scenario(3), alpha, betas);
    for (int d = 0; d < 7; ++d) CHECK(taus[d] == alpha);
    for (int d = 7; d < 10; ++d) CHECK(taus[d] == betas[d - 7]);
    CHECK(true_informative(ScenarioSpec::for_scenario(3)) ==
          std::vector<int>{1, 1, 1, 1, 1, 1, 1, 0, 0, 0});
  }
  SUBCASE("scenario 4 repeats the farthest beta") {
    const auto taus =
        make_scenario(ScenarioSpec::for_scenario(4), alpha, betas);
    for (int d = 7; d < 10; ++d) CHECK(taus[d] == betas[1]);
  }
  SUBCASE("scenario 5 repeats the closest beta") {
    const auto taus =
        make_scenario(ScenarioSpec::for_scenario(5), alpha, betas);
    for (int d = 7; d < 10; ++d) CHECK(taus[d] == betas[0]);
  }
  SUBCASE("bad inputs are rejected") {
    CHECK_THROWS_AS(make_scenario({9, 10, 7}, alpha, betas),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        make_scenario(ScenarioSpec::for_scenario(2), alpha, {betas[0]}),
        std::invalid_argument);
  }
}

TEST_CASE("simulate_reads") {
  SUBCASE("single-isoform round trip recovers the drawn fragment length") {
    const GeneModel gene("s", {{101, 400}, {501, 900}}, {{"iso1", {1, 2}}});
    Rng rng(77);
    SimConfig cfg;
    cfg.n_reads = 300;
    cfg.frag_mean = 180.0;
    cfg.frag_sd = 15.0;
    cfg.read_len = 50;
    const SimulatedSample sample = simulate_reads(gene, {1.0}, cfg, rng);
    for (std::size_t k = 0; k < sample.reads.size(); ++k) {
      CHECK(compatible_isoforms(sample.reads[k], gene) == std::vector<int>{1});
      CHECK(fragment_length(sample.reads[k], 1, gene) ==
            sample.fragment_lengths[k]);
    }
  }

  SUBCASE("degenerate tau pins every origin") {
    const GeneModel gene = fixture_gene();
    Rng rng(78);
    SimConfig cfg;
    cfg.n_reads = 100;
    cfg.frag_mean = 150.0;
    cfg.frag_sd = 10.0;
    cfg.read_len = 50;
    const SimulatedSample sample = simulate_reads(gene, {1.0, 0.0}, cfg, rng);
    for (int origin : sample.true_origins) CHECK(origin == 1);
  }

  SUBCASE("origin counts follow tau") {
    const GeneModel gene = fixture_gene();
    Rng rng(79);
    SimConfig cfg;
    cfg.n_reads = 500;
    cfg.frag_mean = 150.0;
    cfg.frag_sd = 10.0;
    cfg.read_len = 50;
    const SimulatedSample sample = simulate_reads(gene, {0.6, 0.4}, cfg, rng);
    const long ones = std::count(sample.true_origins.begin(),
                                 sample.true_origins.end(), 1);
    CHECK(std::fabs(ones / 500.0 - 0.6) < 0.06);
  }

  SUBCASE("true isoform is always compatible across scenarios") {
    Rng rng(80);
    const GeneModel gene = fixture_gene();
    for (int scenario = 1; scenario <= 5; ++scenario) {
      const Proportions p = gen_proportions(2, rng);
      const auto taus = make_scenario(ScenarioSpec::for_scenario(scenario),
                                      p.alpha, p.betas);
      SimConfig cfg;
      cfg.n_reads = 40;
      cfg.frag_mean = 150.0;
      cfg.frag_sd = 10.0;
      cfg.read_len = 50;
      for (const auto& tau : taus) {
        const SimulatedSample sample = simulate_reads(gene, tau, cfg, rng);
        for (std::size_t k = 0; k < sample.reads.size(); ++k) {
          const auto compat = compatible_isoforms(sample.reads[k], gene);
          CHECK(std::find(compat.begin(), compat.end(),
                          sample.true_origins[k]) != compat.end());
        }
      }
    }
  }

  SUBCASE("raw fragment draws pass a KS test against the Gaussian") {
    // long gene so no draw is clamped
    const GeneModel gene("s", {{1, 5000}}, {{"iso1", {1}}});
    Rng rng(81);
    SimConfig cfg;
    cfg.n_reads = 10000;
    cfg.frag_mean = 300.0;
    cfg.frag_sd = 10.0;
    cfg.read_len = 50;
    const SimulatedSample sample = simulate_reads(gene, {1.0}, cfg, rng);
    std::vector<double> draws = sample.normal_draws;
    std::sort(draws.begin(), draws.end());
    double ks = 0.0;
    const double n = static_cast<double>(draws.size());
    for (std::size_t k = 0; k < draws.size(); ++k) {
      const double cdf = normal_cdf(draws[k], cfg.frag_mean, cfg.frag_sd);
      ks = std::max(ks, std::fabs(cdf - (k + 1) / n));
      ks = std::max(ks, std::fabs(cdf - k / n));
    }
    CHECK(ks < 1.628 / std::sqrt(n));  // 1% critical value
  }

  SUBCASE("short transcripts are flagged and stay valid") {
    const GeneModel gene("s", {{1, 60}}, {{"iso1", {1}}});
    Rng rng(82);
    SimConfig cfg;
    cfg.n_reads = 50;
    cfg.frag_mean = 150.0;
    cfg.frag_sd = 10.0;
    cfg.read_len = 50;  // 2 * 50 > 60
    const SimulatedSample sample = simulate_reads(gene, {1.0}, cfg, rng);
    CHECK(sample.full_transcript_reads == 50);
    for (std::size_t k = 0; k < sample.reads.size(); ++k) {
      CHECK(sample.fragment_lengths[k] == 60);
      CHECK(fragment_length(sample.reads[k], 1, gene) == 60);
    }
    cfg.strict = true;
    CHECK_THROWS_AS(simulate_reads(gene, {1.0}, cfg, rng),
                    std::invalid_argument);
  }

  SUBCASE("deterministic given the seed") {
    const GeneModel gene = fixture_gene();
    SimConfig cfg;
    cfg.n_reads = 50;
    cfg.frag_mean = 150.0;
    cfg.frag_sd = 10.0;
    cfg.read_len = 50;
    Rng r1(4242), r2(4242);
    const SimulatedSample a = simulate_reads(gene, {0.5, 0.5}, cfg, r1);
    const SimulatedSample b = simulate_reads(gene, {0.5, 0.5}, cfg, r2);
    CHECK(a.true_origins == b.true_origins);
    CHECK(a.fragment_lengths == b.fragment_lengths);
    for (std::size_t k = 0; k < a.reads.size(); ++k) {
      CHECK(a.reads[k].s1 == b.reads[k].s1);
      CHECK(a.reads[k].y_first == b.reads[k].y_first);
      CHECK(a.reads[k].y_last == b.reads[k].y_last);
    }
  }
}

TEST_CASE("random_gene respects its constraints") {
  Rng rng(31);
  RandomGeneConfig cfg;
  for (int trial = 0; trial < 30; ++trial) {
    const GeneModel gene = random_gene("g", cfg, rng);
    CHECK(gene.num_subexons() >= cfg.min_subexons);
    CHECK(gene.num_subexons() <= cfg.max_subexons);
    CHECK(gene.num_isoforms() >= 2);
    CHECK(gene.num_isoforms() <= cfg.max_isoforms);
    std::set<std::vector<int>> seen;
    for (const Isoform& iso : gene.isoforms()) {
      CHECK(iso.subexon_indices.front() == 1);
      CHECK(iso.subexon_indices.back() == gene.num_subexons());
      seen.insert(iso.subexon_indices);
    }
    CHECK(static_cast<int>(seen.size()) == gene.num_isoforms());
  }
}

TEST_CASE("fragment length under the true isoform ignores other isoforms") {
  // same subexon structure, one gene with an extra isoform
  const GeneModel lean("g", {{1, 200}, {301, 400}, {501, 700}},
                       {{"iso1", {1, 2, 3}}});
  const GeneModel rich("g", {{1, 200}, {301, 400}, {501, 700}},
                       {{"iso1", {1, 2, 3}}, {"iso2", {1, 3}}});
  Rng rng(90);
  SimConfig cfg;
  cfg.n_reads = 200;
  cfg.frag_mean = 160.0;
  cfg.frag_sd = 12.0;
  cfg.read_len = 40;
  const SimulatedSample sample = simulate_reads(lean, {1.0}, cfg, rng);
  for (std::size_t k = 0; k < sample.reads.size(); ++k)
    CHECK(fragment_length(sample.reads[k], 1, lean) ==
          fragment_length(sample.reads[k], 1, rich));
}
