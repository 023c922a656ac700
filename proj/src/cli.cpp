#include "msiq/cli.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <thread>

#include "CLI11.hpp"
#include "msiq/em.hpp"
#include "msiq/errors.hpp"
#include "msiq/evaluate.hpp"
#include "msiq/gibbs.hpp"
#include "msiq/io.hpp"
#include "msiq/simulate.hpp"

namespace msiq {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("MSIQ_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw std::invalid_argument("MSIQ_SEED is not an integer");
    }
  }
  return 1;
}

std::vector<int> parse_int_list(const std::string& text, const char* what) {
  std::vector<int> out;
  std::string tok;
  for (char c : text + ",") {
    if (c == ',') {
      if (!tok.empty()) out.push_back(std::stoi(tok));
      tok.clear();
    } else {
      tok += c;
    }
  }
  if (out.empty())
    throw std::invalid_argument(std::string(what) + ": empty list");
  return out;
}

std::string sample_file_name(int d) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "sample_%03d.tsv", d + 1);
  return buf;
}

// ---------------------------------------------------------------- simulate

struct SimulateOptions {
  std::string out_dir;
  std::string annotation;
  int n_genes = 20;
  int scenario = 1;
  int samples = 10;
  int n_reads = 500;
  double frag_mean = 250.0;
  double frag_sd = 10.0;
  int read_len = 100;
  bool strict = false;
  std::optional<std::uint64_t> seed;
};

int cmd_simulate(const SimulateOptions& opt, std::ostream& out) {
  const std::uint64_t seed = resolve_seed(opt.seed);
  json config{{"annotation", opt.annotation}, {"n_genes", opt.n_genes},
              {"scenario", opt.scenario},     {"samples", opt.samples},
              {"n_reads", opt.n_reads},       {"frag_mean", opt.frag_mean},
              {"frag_sd", opt.frag_sd},       {"read_len", opt.read_len},
              {"strict", opt.strict},         {"seed", seed}};
  const json provenance = make_provenance("simulate", config);

  std::vector<GeneModel> genes;
  if (!opt.annotation.empty()) {
    genes = load_annotation(opt.annotation);
  } else {
    RandomGeneConfig gene_cfg;
    for (int g = 0; g < opt.n_genes; ++g) {
      char name[32];
      std::snprintf(name, sizeof(name), "gene%04d", g + 1);
      Rng rng(derive_seed(seed, g, 0, 0, 0, 7));
      genes.push_back(random_gene(name, gene_cfg, rng));
    }
  }

  fs::create_directories(fs::path(opt.out_dir) / "reads");
  save_annotation((fs::path(opt.out_dir) / "annotation.json").string(), genes,
                  provenance);

  const ScenarioSpec spec = ScenarioSpec::for_scenario(opt.scenario, opt.samples);
  SimConfig sim;
  sim.n_reads = opt.n_reads;
  sim.frag_mean = opt.frag_mean;
  sim.frag_sd = opt.frag_sd;
  sim.read_len = opt.read_len;
  sim.strict = opt.strict;

  std::vector<GeneTruth> truths;
  for (std::size_t g = 0; g < genes.size(); ++g) {
    const GeneModel& gene = genes[g];
    Rng rng(gene_seed(seed, g));
    const Proportions props = gen_proportions(gene.num_isoforms(), rng);
    const auto taus = make_scenario(spec, props.alpha, props.betas);

    GeneTruth truth;
    truth.gene_id = gene.gene_id();
    truth.alpha = props.alpha;
    truth.per_sample_tau = taus;
    truth.true_E = true_informative(spec);

    const fs::path gene_dir = fs::path(opt.out_dir) / "reads" / gene.gene_id();
    fs::create_directories(gene_dir);
    for (int d = 0; d < spec.num_samples; ++d) {
      const SimulatedSample sample = simulate_reads(gene, taus[d], sim, rng);
      save_reads_tsv((gene_dir / sample_file_name(d)).string(), sample.reads,
                     provenance);
      truth.true_origins.push_back(sample.true_origins);
    }
    truths.push_back(std::move(truth));
  }
  save_truth((fs::path(opt.out_dir) / "truth.json").string(), truths, provenance);
  out << "simulated " << genes.size() << " genes x " << spec.num_samples
      << " samples into " << opt.out_dir << "\n";
  return 0;
}

// ---------------------------------------------------------------- estimate

struct EstimateOptions {
  std::string annotation;
  std::string reads_dir;
  std::string out_dir;
  std::string methods = "all";
  std::string truth_path;
  std::string fraglen_path;
  std::optional<double> frag_mean;
  std::optional<double> frag_sd;
  double lambda = 1.0;
  double a = 1.0;
  double b = 1.0;
  int iterations = 2000;
  int burn_in = 500;
  double threshold = 0.5;
  double em_tol = 1e-8;
  int em_max_iter = 1000;
  int workers = 1;
  bool trace = false;
  std::optional<std::uint64_t> seed;
};

struct MethodSet {
  bool msiq = false;
  bool chain_needed = false;
  bool truth_needed = false;
  std::vector<EstimatorKind> em_kinds;
};

MethodSet parse_methods(const std::string& text) {
  MethodSet set;
  std::vector<std::string> tokens;
  std::string tok;
  for (char c : text + ",") {
    if (c == ',') {
      if (!tok.empty()) tokens.push_back(tok);
      tok.clear();
    } else {
      tok += c;
    }
  }
  for (const std::string& name : tokens) {
    if (name == "all") {
      return parse_methods("msiq,avg,avg-oracle,pool,pool-oracle,msiqa,msiqp");
    } else if (name == "msiq") {
      set.msiq = true;
    } else if (auto kind = estimator_from_name(name)) {
      set.em_kinds.push_back(*kind);
    } else {
      throw std::invalid_argument("unknown method '" + name + "'");
    }
  }
  for (EstimatorKind kind : set.em_kinds) {
    if (kind == EstimatorKind::AvgOracle || kind == EstimatorKind::PoolOracle)
      set.truth_needed = true;
    if (kind == EstimatorKind::MsiqA || kind == EstimatorKind::MsiqP)
      set.chain_needed = true;
  }
  set.chain_needed = set.chain_needed || set.msiq;
  if (!set.msiq && set.em_kinds.empty())
    throw std::invalid_argument("no methods selected");
  return set;
}

struct GeneOutcome {
  std::string gene_id;
  std::string skip_reason;  // non-empty marks a skipped gene
  std::vector<std::pair<std::string, std::string>> files;  // name -> content
};

int cmd_estimate(const EstimateOptions& opt, std::ostream& out) {
  const std::uint64_t seed = resolve_seed(opt.seed);
  const MethodSet methods = parse_methods(opt.methods);

  FragmentLengthModel flm;
  if (!opt.fraglen_path.empty()) {
    const json fj = read_json_file(opt.fraglen_path);
    flm.mean = fj.at("mean").get<double>();
    flm.sd = fj.at("sd").get<double>();
  } else if (opt.frag_mean && opt.frag_sd) {
    flm = {*opt.frag_mean, *opt.frag_sd};
  } else {
    throw std::invalid_argument(
        "estimate needs --fraglen or both --frag-mean and --frag-sd");
  }

  json config{{"annotation", opt.annotation},
              {"reads_dir", opt.reads_dir},
              {"method", opt.methods},
              {"truth", opt.truth_path},
              {"frag_mean", flm.mean},
              {"frag_sd", flm.sd},
              {"lambda", opt.lambda},
              {"a", opt.a},
              {"b", opt.b},
              {"iterations", opt.iterations},
              {"burnin", opt.burn_in},
              {"threshold", opt.threshold},
              {"em_tol", opt.em_tol},
              {"em_max_iter", opt.em_max_iter},
              {"seed", seed}};
  const json provenance = make_provenance("estimate", config);

  const std::vector<GeneModel> genes = load_annotation(opt.annotation);

  std::map<std::string, GeneTruth> truth_by_gene;
  if (!opt.truth_path.empty())
    for (GeneTruth& t : load_truth(opt.truth_path))
      truth_by_gene[t.gene_id] = std::move(t);
  if (methods.truth_needed && opt.truth_path.empty())
    throw std::invalid_argument("oracle methods need --truth");

  // Sample files per gene; every gene must carry the full union of names.
  std::vector<std::vector<std::string>> gene_files(genes.size());
  std::set<std::string> expected;
  for (std::size_t g = 0; g < genes.size(); ++g) {
    const fs::path dir = fs::path(opt.reads_dir) / genes[g].gene_id();
    if (fs::is_directory(dir)) {
      for (const auto& entry : fs::directory_iterator(dir))
        if (entry.path().extension() == ".tsv")
          gene_files[g].push_back(entry.path().filename().string());
      std::sort(gene_files[g].begin(), gene_files[g].end());
      expected.insert(gene_files[g].begin(), gene_files[g].end());
    }
  }
  if (expected.empty())
    throw std::invalid_argument("no read files under " + opt.reads_dir);

  std::vector<GeneOutcome> outcomes(genes.size());
  const auto process_gene = [&](std::size_t g) {
    GeneOutcome& res = outcomes[g];
    const GeneModel& gene = genes[g];
    res.gene_id = gene.gene_id();
    const std::set<std::string> have(gene_files[g].begin(), gene_files[g].end());
    if (have != expected) {
      res.skip_reason = "missing reads in at least one sample";
      return;
    }

    std::vector<GeneratingMatrix> H;
    long dropped = 0;
    for (const std::string& name : expected) {
      const auto reads = load_reads_tsv(
          (fs::path(opt.reads_dir) / gene.gene_id() / name).string(), gene);
      if (reads.empty()) {
        res.skip_reason = "sample " + name + " has no reads";
        return;
      }
      GeneratingMatrixResult built = generating_matrix(reads, gene, flm);
      dropped += static_cast<long>(built.dropped_read_ids.size());
      H.push_back(std::move(built.matrix));
    }

    Hyperparameters hyper;
    hyper.lambda.assign(gene.num_isoforms(), opt.lambda);
    hyper.a = opt.a;
    hyper.b = opt.b;

    std::optional<std::vector<int>> true_e;
    if (methods.truth_needed) {
      const auto it = truth_by_gene.find(gene.gene_id());
      if (it == truth_by_gene.end()) {
        res.skip_reason = "gene missing from truth file";
        return;
      }
      if (it->second.true_E.size() != H.size()) {
        res.skip_reason = "truth true_E does not match sample count";
        return;
      }
      true_e = it->second.true_E;
    }

    std::optional<PosteriorSummary> posterior;
    if (methods.chain_needed) {
      ChainConfig chain;
      chain.iterations = opt.iterations;
      chain.burn_in = opt.burn_in;
      chain.seed = gene_seed(seed, g);
      chain.keep_alpha_trace = opt.trace;
      posterior = run_chain(H, hyper, chain);
    }
    if (methods.msiq) {
      res.files.emplace_back(
          gene.gene_id() + ".msiq.json",
          chain_result_json(gene.gene_id(), *posterior, dropped, provenance)
                  .dump(2) +
              "\n");
      if (opt.trace) {
        std::string trace = "# provenance: " + provenance.dump() + "\n";
        trace += "# columns: iteration\talpha_1..alpha_J\n";
        for (std::size_t t = 0; t < posterior->alpha_trace.size(); ++t) {
          trace += std::to_string(t + 1);
          for (double v : posterior->alpha_trace[t]) {
            trace += '\t';
            trace += format_double(v);
          }
          trace += '\n';
        }
        res.files.emplace_back(gene.gene_id() + ".trace.tsv", std::move(trace));
      }
    }

    EmConfig em;
    em.tol = opt.em_tol;
    em.max_iter = opt.em_max_iter;
    for (EstimatorKind kind : methods.em_kinds) {
      const EstimateResult r = estimate(
          kind, H, em, true_e,
          posterior ? std::optional<std::vector<double>>(posterior->theta_hat)
                    : std::nullopt,
          opt.threshold);
      res.files.emplace_back(
          gene.gene_id() + "." + estimator_name(kind) + ".json",
          estimator_report_json(gene.gene_id(), estimator_name(kind), r,
                                provenance)
                  .dump(2) +
              "\n");
    }
  };

  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (;;) {
      const std::size_t g = next.fetch_add(1);
      if (g >= genes.size()) return;
      try {
        process_gene(g);
      } catch (const std::exception& e) {
        outcomes[g].gene_id = genes[g].gene_id();
        outcomes[g].files.clear();
        outcomes[g].skip_reason = e.what();
      }
    }
  };
  if (opt.workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (int w = 0; w < opt.workers; ++w) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }

  const fs::path results = fs::path(opt.out_dir) / "results";
  fs::create_directories(results);
  json skipped = json::array();
  long written = 0;
  for (const GeneOutcome& res : outcomes) {
    if (!res.skip_reason.empty()) {
      skipped.push_back(json{{"gene_id", res.gene_id}, {"reason", res.skip_reason}});
      continue;
    }
    for (const auto& [name, content] : res.files) {
      write_text_file((results / name).string(), content);
      ++written;
    }
  }
  write_json_file((fs::path(opt.out_dir) / "skips.json").string(),
                  json{{"provenance", provenance}, {"skipped", skipped}});
  out << "wrote " << written << " result files; skipped " << skipped.size()
      << " genes\n";
  return 0;
}

// ---------------------------------------------------------------- fraglen

struct FraglenOptions {
  std::string annotation;
  std::string reads_dir;
  std::string out_path;
};

int cmd_fraglen(const FraglenOptions& opt, std::ostream& out) {
  json config{{"annotation", opt.annotation}, {"reads_dir", opt.reads_dir}};
  const json provenance = make_provenance("fraglen", config);

  const std::vector<GeneModel> genes = load_annotation(opt.annotation);
  std::vector<std::pair<SummarizedRead, GeneModel>> pairs;
  std::vector<std::string> genes_used;
  long dropped = 0;
  for (const GeneModel& gene : genes) {
    if (gene.num_isoforms() != 1) continue;
    const fs::path dir = fs::path(opt.reads_dir) / gene.gene_id();
    if (!fs::is_directory(dir)) continue;
    std::vector<std::string> names;
    for (const auto& entry : fs::directory_iterator(dir))
      if (entry.path().extension() == ".tsv")
        names.push_back(entry.path().string());
    std::sort(names.begin(), names.end());
    bool used = false;
    for (const std::string& name : names) {
      for (SummarizedRead& read : load_reads_tsv(name, gene)) {
        if (compatible_isoforms(read, gene).empty()) {
          ++dropped;
          continue;
        }
        pairs.emplace_back(std::move(read), gene);
        used = true;
      }
    }
    if (used) genes_used.push_back(gene.gene_id());
  }
  if (pairs.size() < 2)
    throw std::invalid_argument(
        "fraglen needs at least 2 reads from single-isoform genes");
  const FragmentLengthModel flm = estimate_fragment_params(pairs);
  write_json_file(opt.out_path, json{{"provenance", provenance},
                                     {"mean", flm.mean},
                                     {"sd", flm.sd},
                                     {"n_fragments", pairs.size()},
                                     {"genes_used", genes_used},
                                     {"dropped_reads", dropped}});
  out << "fragment length mean " << flm.mean << " sd " << flm.sd << " from "
      << pairs.size() << " reads\n";
  return 0;
}

// ---------------------------------------------------------------- sweep

struct SweepOptions {
  std::string out_dir;
  std::string annotation;
  int n_genes = 50;
  std::string scenarios = "1,2,3,4,5";
  std::string settings = "1";
  int replicates = 1;
  int samples = 10;
  int n_reads = 500;
  double frag_sd = 10.0;
  double lambda = 1.0;
  double a = 1.0;
  double b = 1.0;
  int iterations = 2000;
  int burn_in = 500;
  double threshold = 0.5;
  double em_tol = 1e-8;
  int em_max_iter = 1000;
  int workers = 1;
  std::optional<std::uint64_t> seed;
};

int cmd_sweep(const SweepOptions& opt, std::ostream& out) {
  const std::uint64_t seed = resolve_seed(opt.seed);
  json config{{"annotation", opt.annotation},
              {"n_genes", opt.n_genes},
              {"scenarios", opt.scenarios},
              {"settings", opt.settings},
              {"replicates", opt.replicates},
              {"samples", opt.samples},
              {"n_reads", opt.n_reads},
              {"frag_sd", opt.frag_sd},
              {"lambda", opt.lambda},
              {"a", opt.a},
              {"b", opt.b},
              {"iterations", opt.iterations},
              {"burnin", opt.burn_in},
              {"threshold", opt.threshold},
              {"em_tol", opt.em_tol},
              {"em_max_iter", opt.em_max_iter},
              {"seed", seed}};
  const json provenance = make_provenance("sweep", config);

  std::vector<GeneModel> genes;
  if (!opt.annotation.empty()) {
    genes = load_annotation(opt.annotation);
  } else {
    RandomGeneConfig gene_cfg;
    for (int g = 0; g < opt.n_genes; ++g) {
      char name[32];
      std::snprintf(name, sizeof(name), "gene%04d", g + 1);
      Rng rng(derive_seed(seed, g, 0, 0, 0, 7));
      genes.push_back(random_gene(name, gene_cfg, rng));
    }
  }

  SweepConfig cfg;
  cfg.scenarios = parse_int_list(opt.scenarios, "--scenarios");
  cfg.settings = parse_int_list(opt.settings, "--settings");
  cfg.replicates = opt.replicates;
  cfg.num_samples = opt.samples;
  cfg.n_reads = opt.n_reads;
  cfg.frag_sd = opt.frag_sd;
  cfg.seed = seed;
  cfg.workers = opt.workers;
  cfg.lambda = opt.lambda;
  cfg.a = opt.a;
  cfg.b = opt.b;
  cfg.chain.iterations = opt.iterations;
  cfg.chain.burn_in = opt.burn_in;
  cfg.em.tol = opt.em_tol;
  cfg.em.max_iter = opt.em_max_iter;
  cfg.threshold = opt.threshold;

  const ReeReport report = sweep(genes, cfg);

  fs::create_directories(opt.out_dir);
  save_annotation((fs::path(opt.out_dir) / "genes.json").string(), genes,
                  provenance);
  save_ree_report_tsv((fs::path(opt.out_dir) / "report.tsv").string(),
                      report.rows, provenance);
  write_json_file((fs::path(opt.out_dir) / "aggregates.json").string(),
                  ree_aggregates_json(report, provenance));
  out << "swept " << genes.size() << " genes; " << report.rows.size()
      << " rows, " << report.failures.size() << " failures\n";
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Joint Bayesian isoform quantification from multiple RNA-seq samples"};
  app.require_subcommand(1);

  SimulateOptions sim;
  CLI::App* c_sim = app.add_subcommand("simulate", "Generate synthetic multi-sample read data");
  c_sim->add_option("--out", sim.out_dir, "Output directory")->required();
  c_sim->add_option("--annotation", sim.annotation, "Gene annotation JSON (default: random genes)");
  c_sim->add_option("--n-genes", sim.n_genes, "Random genes to generate")->check(CLI::PositiveNumber);
  c_sim->add_option("--scenario", sim.scenario, "Heterogeneity scenario 1-5")->check(CLI::Range(1, 5));
  c_sim->add_option("--samples", sim.samples, "Samples per gene")->check(CLI::PositiveNumber);
  c_sim->add_option("--n-reads", sim.n_reads, "Read pairs per gene per sample")->check(CLI::PositiveNumber);
  c_sim->add_option("--frag-mean", sim.frag_mean, "Mean fragment length (bp)")->check(CLI::PositiveNumber);
  c_sim->add_option("--frag-sd", sim.frag_sd, "Fragment length sd (bp)")->check(CLI::PositiveNumber);
  c_sim->add_option("--read-len", sim.read_len, "Read end length (bp)")->check(CLI::PositiveNumber);
  c_sim->add_flag("--strict", sim.strict, "Error on transcripts shorter than a read pair");
  c_sim->add_option("--seed", sim.seed, "RNG seed (falls back to MSIQ_SEED, then 1)");

  EstimateOptions est;
  CLI::App* c_est = app.add_subcommand("estimate", "Estimate isoform proportions per gene");
  c_est->add_option("--annotation", est.annotation, "Gene annotation JSON")->required();
  c_est->add_option("--reads-dir", est.reads_dir, "Directory with per-gene read TSVs")->required();
  c_est->add_option("--out", est.out_dir, "Output directory")->required();
  c_est->add_option("--method", est.methods,
                    "Comma list of msiq,avg,pool,avg-oracle,pool-oracle,msiqa,msiqp or all");
  c_est->add_option("--truth", est.truth_path, "Truth JSON (needed by oracle methods)");
  c_est->add_option("--fraglen", est.fraglen_path, "Fragment model JSON from the fraglen subcommand");
  c_est->add_option("--frag-mean", est.frag_mean, "Mean fragment length (bp)");
  c_est->add_option("--frag-sd", est.frag_sd, "Fragment length sd (bp)");
  c_est->add_option("--lambda", est.lambda, "Dirichlet prior weight per isoform")->check(CLI::PositiveNumber);
  c_est->add_option("--a", est.a, "Beta prior a")->check(CLI::PositiveNumber);
  c_est->add_option("--b", est.b, "Beta prior b")->check(CLI::PositiveNumber);
  c_est->add_option("--iterations", est.iterations, "Retained chain iterations")->check(CLI::PositiveNumber);
  c_est->add_option("--burnin", est.burn_in, "Burn-in sweeps")->check(CLI::NonNegativeNumber);
  c_est->add_option("--threshold", est.threshold, "Informative-group threshold on theta");
  c_est->add_option("--em-tol", est.em_tol, "EM log-likelihood tolerance")->check(CLI::PositiveNumber);
  c_est->add_option("--em-max-iter", est.em_max_iter, "EM iteration cap")->check(CLI::PositiveNumber);
  c_est->add_option("--workers", est.workers, "Gene-level worker threads")->check(CLI::PositiveNumber);
  c_est->add_flag("--trace", est.trace, "Dump the per-iteration alpha trace");
  c_est->add_option("--seed", est.seed, "RNG seed (falls back to MSIQ_SEED, then 1)");

  FraglenOptions fra;
  CLI::App* c_fra = app.add_subcommand("fraglen", "Fit the fragment-length model from single-isoform genes");
  c_fra->add_option("--annotation", fra.annotation, "Gene annotation JSON")->required();
  c_fra->add_option("--reads-dir", fra.reads_dir, "Directory with per-gene read TSVs")->required();
  c_fra->add_option("--out", fra.out_path, "Output JSON path")->required();

  SweepOptions swp;
  CLI::App* c_swp = app.add_subcommand("sweep", "Benchmark the estimators over scenarios and settings");
  c_swp->add_option("--out", swp.out_dir, "Output directory")->required();
  c_swp->add_option("--annotation", swp.annotation, "Gene annotation JSON (default: random genes)");
  c_swp->add_option("--n-genes", swp.n_genes, "Random genes to generate")->check(CLI::PositiveNumber);
  c_swp->add_option("--scenarios", swp.scenarios, "Comma list of scenarios 1-5");
  c_swp->add_option("--settings", swp.settings, "Comma list of length settings 1-4");
  c_swp->add_option("--replicates", swp.replicates, "Replicates per gene")->check(CLI::PositiveNumber);
  c_swp->add_option("--samples", swp.samples, "Samples per gene")->check(CLI::PositiveNumber);
  c_swp->add_option("--n-reads", swp.n_reads, "Read pairs per gene per sample")->check(CLI::PositiveNumber);
  c_swp->add_option("--frag-sd", swp.frag_sd, "Fragment length sd (bp)")->check(CLI::PositiveNumber);
  c_swp->add_option("--lambda", swp.lambda, "Dirichlet prior weight per isoform")->check(CLI::PositiveNumber);
  c_swp->add_option("--a", swp.a, "Beta prior a")->check(CLI::PositiveNumber);
  c_swp->add_option("--b", swp.b, "Beta prior b")->check(CLI::PositiveNumber);
  c_swp->add_option("--iterations", swp.iterations, "Retained chain iterations")->check(CLI::PositiveNumber);
  c_swp->add_option("--burnin", swp.burn_in, "Burn-in sweeps")->check(CLI::NonNegativeNumber);
  c_swp->add_option("--threshold", swp.threshold, "Informative-group threshold on theta");
  c_swp->add_option("--em-tol", swp.em_tol, "EM log-likelihood tolerance")->check(CLI::PositiveNumber);
  c_swp->add_option("--em-max-iter", swp.em_max_iter, "EM iteration cap")->check(CLI::PositiveNumber);
  c_swp->add_option("--workers", swp.workers, "Worker threads")->check(CLI::PositiveNumber);
  c_swp->add_option("--seed", swp.seed, "RNG seed (falls back to MSIQ_SEED, then 1)");

  std::vector<const char*> argv;
  argv.push_back("msiq");
  for (const std::string& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << json{{"error", e.what()}}.dump() << "\n";
    return e.get_exit_code() == 0 ? 1 : e.get_exit_code();
  }

  try {
    if (c_sim->parsed()) return cmd_simulate(sim, out);
    if (c_est->parsed()) return cmd_estimate(est, out);
    if (c_fra->parsed()) return cmd_fraglen(fra, out);
    if (c_swp->parsed()) return cmd_sweep(swp, out);
    err << json{{"error", "no subcommand"}}.dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << json{{"error", e.what()}}.dump() << "\n";
    return 1;
  }
}

}  // namespace msiq
