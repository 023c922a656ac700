#include "msiq/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace msiq {

using nlohmann::json;

namespace {

long parse_long(const std::string& text, const std::string& where) {
  long value = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw std::invalid_argument(where + ": bad integer '" + text + "'");
  return value;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.push_back("");
  return out;
}

std::vector<int> parse_index_set(const std::string& text,
                                 const std::string& where) {
  std::vector<int> out;
  for (const std::string& tok : split(text, ','))
    out.push_back(static_cast<int>(parse_long(tok, where)));
  if (out.empty()) throw std::invalid_argument(where + ": empty index set");
  return out;
}

std::string join_index_set(const std::vector<int>& idx) {
  std::string out;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (k) out += ',';
    out += std::to_string(idx[k]);
  }
  return out;
}

// "a-b,c-d" interval list expanded to its covered positions.
std::vector<long> parse_interval_positions(const std::string& text,
                                           const std::string& where) {
  std::vector<long> out;
  for (const std::string& tok : split(text, ',')) {
    const auto dash = tok.find('-');
    if (dash == std::string::npos)
      throw std::invalid_argument(where + ": bad interval '" + tok + "'");
    const long lo = parse_long(tok.substr(0, dash), where);
    const long hi = parse_long(tok.substr(dash + 1), where);
    if (lo > hi)
      throw std::invalid_argument(where + ": bad interval '" + tok + "'");
    for (long p = lo; p <= hi; ++p) out.push_back(p);
  }
  return out;
}

GenomicInterval interval_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2)
    throw std::invalid_argument(where + ": interval must be [start, end]");
  return {j[0].get<long>(), j[1].get<long>()};
}

}  // namespace

json make_provenance(const std::string& subcommand, const json& config) {
  return json{{"tool", "msiq"},
              {"version", kVersion},
              {"subcommand", subcommand},
              {"config", config}};
}

GeneModel gene_from_json(const json& j) {
  if (!j.contains("gene_id"))
    throw std::invalid_argument("annotation: gene object lacks gene_id");
  const std::string gene_id = j.at("gene_id").get<std::string>();
  if (!j.contains("isoforms"))
    throw std::invalid_argument("annotation: gene " + gene_id + " lacks isoforms");

  if (j.contains("subexons")) {
    std::vector<GenomicInterval> subexons;
    for (const json& iv : j.at("subexons"))
      subexons.push_back(interval_from_json(iv, gene_id));
    std::vector<Isoform> isoforms;
    for (const json& iso : j.at("isoforms")) {
      Isoform out;
      out.isoform_id = iso.at("isoform_id").get<std::string>();
      for (const json& idx : iso.at("subexon_indices"))
        out.subexon_indices.push_back(idx.get<int>());
      isoforms.push_back(std::move(out));
    }
    return GeneModel(gene_id, std::move(subexons), std::move(isoforms));
  }

  std::vector<ExonIsoform> isoforms;
  for (const json& iso : j.at("isoforms")) {
    ExonIsoform out;
    out.isoform_id = iso.at("isoform_id").get<std::string>();
    for (const json& iv : iso.at("exons"))
      out.exons.push_back(interval_from_json(iv, gene_id));
    isoforms.push_back(std::move(out));
  }
  return derive_subexons(gene_id, isoforms);
}

json gene_to_json(const GeneModel& gene) {
  json subexons = json::array();
  for (const GenomicInterval& iv : gene.subexons())
    subexons.push_back(json::array({iv.start, iv.end}));
  json isoforms = json::array();
  for (const Isoform& iso : gene.isoforms())
    isoforms.push_back(json{{"isoform_id", iso.isoform_id},
                            {"subexon_indices", iso.subexon_indices}});
  return json{{"gene_id", gene.gene_id()},
              {"subexons", subexons},
              {"isoforms", isoforms}};
}

std::vector<GeneModel> load_annotation(const std::string& path) {
  const json j = read_json_file(path);
  const json* genes = nullptr;
  if (j.is_object() && j.contains("genes"))
    genes = &j.at("genes");
  else if (j.is_array())
    genes = &j;
  std::vector<GeneModel> out;
  if (genes) {
    for (const json& g : *genes) out.push_back(gene_from_json(g));
  } else {
    out.push_back(gene_from_json(j));
  }
  if (out.empty()) throw std::invalid_argument(path + ": no genes");
  return out;
}

void save_annotation(const std::string& path, const std::vector<GeneModel>& genes,
                     const json& provenance) {
  json list = json::array();
  for (const GeneModel& g : genes) list.push_back(gene_to_json(g));
  write_json_file(path, json{{"provenance", provenance}, {"genes", list}});
}

void save_reads_tsv(const std::string& path,
                    const std::vector<SummarizedRead>& reads,
                    const json& provenance) {
  std::string out = "# provenance: " + provenance.dump() + "\n";
  out += "# columns: read_id\ts1\ts2\ty_first\ty_left_last\ty_right_first\ty_last\n";
  for (const SummarizedRead& r : reads) {
    out += r.read_id;
    out += '\t';
    out += join_index_set(r.s1);
    out += '\t';
    out += join_index_set(r.s2);
    out += '\t';
    out += std::to_string(r.y_first);
    out += '\t';
    out += std::to_string(r.y_left_last);
    out += '\t';
    out += std::to_string(r.y_right_first);
    out += '\t';
    out += std::to_string(r.y_last);
    out += '\n';
  }
  write_text_file(path, out);
}

std::vector<SummarizedRead> load_reads_tsv(const std::string& path,
                                           const GeneModel& gene) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<SummarizedRead> out;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const std::string where = path + ":" + std::to_string(line_no);
    const auto fields = split(line, '\t');
    if (fields.size() == 3) {
      // raw form: intervals covered by each end
      out.push_back(summarize_read(
          fields[0], parse_interval_positions(fields[1], where),
          parse_interval_positions(fields[2], where), gene));
    } else if (fields.size() == 7) {
      SummarizedRead r;
      r.read_id = fields[0];
      r.s1 = parse_index_set(fields[1], where);
      r.s2 = parse_index_set(fields[2], where);
      r.y_first = parse_long(fields[3], where);
      r.y_left_last = parse_long(fields[4], where);
      r.y_right_first = parse_long(fields[5], where);
      r.y_last = parse_long(fields[6], where);
      if (!(r.y_first <= r.y_left_last && r.y_left_last <= r.y_right_first &&
            r.y_right_first <= r.y_last))
        throw std::invalid_argument(where + ": read positions out of order");
      for (const std::vector<int>* s : {&r.s1, &r.s2})
        for (int idx : *s)
          if (idx < 1 || idx > gene.num_subexons())
            throw std::invalid_argument(where + ": subexon index out of range");
      // Exact when the left end stays within one subexon; an upper bound
      // otherwise. Nothing downstream depends on it numerically.
      r.half_length = static_cast<int>(r.y_left_last - r.y_first + 1);
      out.push_back(std::move(r));
    } else {
      throw std::invalid_argument(where + ": expected 3 or 7 columns, got " +
                                  std::to_string(fields.size()));
    }
  }
  return out;
}

void save_truth(const std::string& path, const std::vector<GeneTruth>& truths,
                const json& provenance) {
  json list = json::array();
  for (const GeneTruth& t : truths)
    list.push_back(json{{"gene_id", t.gene_id},
                        {"alpha", t.alpha},
                        {"per_sample_tau", t.per_sample_tau},
                        {"true_E", t.true_E},
                        {"true_origins", t.true_origins}});
  write_json_file(path, json{{"provenance", provenance}, {"genes", list}});
}

std::vector<GeneTruth> load_truth(const std::string& path) {
  const json j = read_json_file(path);
  if (!j.is_object() || !j.contains("genes"))
    throw std::invalid_argument(path + ": not a truth file");
  std::vector<GeneTruth> out;
  for (const json& g : j.at("genes")) {
    GeneTruth t;
    t.gene_id = g.at("gene_id").get<std::string>();
    t.alpha = g.at("alpha").get<std::vector<double>>();
    t.per_sample_tau =
        g.at("per_sample_tau").get<std::vector<std::vector<double>>>();
    t.true_E = g.at("true_E").get<std::vector<int>>();
    t.true_origins = g.at("true_origins").get<std::vector<std::vector<int>>>();
    out.push_back(std::move(t));
  }
  return out;
}

json chain_result_json(const std::string& gene_id,
                       const PosteriorSummary& posterior, long dropped_reads,
                       const json& provenance) {
  return json{{"provenance", provenance},
              {"gene_id", gene_id},
              {"alpha_hat", posterior.alpha_hat},
              {"theta_hat", posterior.theta_hat},
              {"iterations", posterior.iterations},
              {"burn_in", posterior.burn_in},
              {"seed", posterior.seed},
              {"dropped_reads", dropped_reads}};
}

json estimator_report_json(const std::string& gene_id, const std::string& kind,
                           const EstimateResult& result,
                           const json& provenance) {
  return json{{"provenance", provenance},
              {"gene_id", gene_id},
              {"kind", kind},
              {"alpha_hat", result.alpha_hat},
              {"em_iterations", result.em_iterations},
              {"loglik", result.logliks}};
}

void save_ree_report_tsv(const std::string& path, const std::vector<ReeRow>& rows,
                         const json& provenance) {
  std::string out = "# provenance: " + provenance.dump() + "\n";
  out += "# columns: gene_id\tscenario\tsetting\treplicate\testimator\tree\n";
  for (const ReeRow& row : rows) {
    out += row.gene_id;
    out += '\t';
    out += std::to_string(row.scenario);
    out += '\t';
    out += std::to_string(row.setting);
    out += '\t';
    out += std::to_string(row.replicate);
    out += '\t';
    out += row.estimator;
    out += '\t';
    out += format_double(row.ree);
    out += '\n';
  }
  write_text_file(path, out);
}

json ree_aggregates_json(const ReeReport& report, const json& provenance) {
  json aggs = json::array();
  for (const ReeAggregate& a : report.aggregates)
    aggs.push_back(json{{"scenario", a.scenario},
                        {"setting", a.setting},
                        {"estimator", a.estimator},
                        {"n", a.n},
                        {"median", a.median},
                        {"q1", a.q1},
                        {"q3", a.q3},
                        {"mean", a.mean}});
  json failures = json::array();
  for (const SweepFailure& f : report.failures)
    failures.push_back(json{{"gene_id", f.gene_id},
                            {"scenario", f.scenario},
                            {"setting", f.setting},
                            {"replicate", f.replicate},
                            {"error", f.error}});
  return json{{"provenance", provenance},
              {"aggregates", aggs},
              {"failures", failures},
              {"zero_alpha_skips", report.zero_alpha_skips}};
}

void write_json_file(const std::string& path, const json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
  return j;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path);
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) return std::to_string(v);
  return std::string(buf, ptr);
}

}  // namespace msiq
