#include "rdpg/experiment.hpp"

#include "rdpg/align.hpp"
#include "rdpg/cluster.hpp"
#include "rdpg/graph_io.hpp"
#include "rdpg/model.hpp"
#include "rdpg/parallel.hpp"
#include "rdpg/spectral.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace rdpg {
namespace {

using nlohmann::json;

constexpr int kSpecVersion = 1;

template <class E>
struct Names {
  E value;
  const char* name;
};

constexpr Names<Setup> kSetups[] = {{Setup::sbm_table1_k3, "sbm_table1_k3"},
                                    {Setup::sbm_table1_k5, "sbm_table1_k5"},
                                    {Setup::sbm_table1_k7, "sbm_table1_k7"},
                                    {Setup::hardy_weinberg, "hardy_weinberg"},
                                    {Setup::edge_list_file, "edge_list_file"}};
constexpr Names<Method> kMethods[] = {{Method::ase, "ase"}, {Method::pse, "pse"}, {Method::gse, "gse"}};
constexpr Names<Metric> kMetrics[] = {{Metric::procrustes_loss, "procrustes_loss"},
                                      {Metric::edge_prob_error, "edge_prob_error"},
                                      {Metric::rand_index, "rand_index"},
                                      {Metric::misclustered, "misclustered"}};

template <class E, std::size_t N>
std::string name_of(const Names<E> (&table)[N], E value) {
  for (const auto& entry : table)
    if (entry.value == value) return entry.name;
  return "?";
}

template <class E, std::size_t N>
E parse_name(const Names<E> (&table)[N], const std::string& name, const char* what) {
  for (const auto& entry : table)
    if (name == entry.name) return entry.value;
  throw SpecError(std::string("unknown ") + what + " '" + name + "'");
}

bool contains(const std::vector<Metric>& metrics, Metric m) {
  return std::find(metrics.begin(), metrics.end(), m) != metrics.end();
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json statistic_json(const std::optional<Statistic>& s) {
  if (!s) return nullptr;
  return {{"mean", s->mean}, {"sd", s->sd}, {"count", s->count}};
}

json chain_json(const ChainConfig& c) {
  return {{"iterations", c.iterations}, {"burn_in", c.burn_in},       {"thin", c.thin},
          {"step_size", c.step_size},   {"seed", c.seed},             {"adapt", c.adapt},
          {"target_acceptance", c.target_acceptance}, {"max_retained", c.max_retained}};
}

ChainConfig chain_from_json(const json& j) {
  ChainConfig c;
  c.iterations = j.value("iterations", c.iterations);
  c.burn_in = j.value("burn_in", c.burn_in);
  c.thin = j.value("thin", c.thin);
  c.step_size = j.value("step_size", c.step_size);
  c.seed = j.value("seed", c.seed);
  c.adapt = j.value("adapt", c.adapt);
  c.target_acceptance = j.value("target_acceptance", c.target_acceptance);
  c.max_retained = j.value("max_retained", c.max_retained);
  return c;
}

// Zero-pads the narrower matrix so Procrustes can compare embeddings of
// different dimension.
std::pair<Matrix, Matrix> pad_to_common_width(const Matrix& a, const Matrix& b) {
  const auto width = std::max(a.cols(), b.cols());
  Matrix pa = Matrix::Zero(a.rows(), width), pb = Matrix::Zero(b.rows(), width);
  pa.leftCols(a.cols()) = a;
  pb.leftCols(b.cols()) = b;
  return {pa, pb};
}

struct Instance {
  AdjacencyMatrix Y;
  std::optional<LatentMatrix> truth;
  std::vector<int> labels;  // truth or reference labels; empty if none
};

Instance make_instance(const ExperimentSpec& spec, int replicate) {
  Instance inst;
  const auto latent_seed = derive_seed(spec.seed, static_cast<std::uint64_t>(replicate), 0);
  const auto graph_seed = derive_seed(spec.seed, static_cast<std::uint64_t>(replicate), 1);
  switch (spec.setup) {
    case Setup::sbm_table1_k3:
    case Setup::sbm_table1_k5:
    case Setup::sbm_table1_k7: {
      auto [X0, truth] = sbm_to_latent(table1_sbm(spec.blocks()), spec.effective_n(), latent_seed);
      inst.Y = sample_rdpg(X0, graph_seed, spec.self_loops);
      inst.truth = std::move(X0);
      inst.labels = std::move(truth.labels);
      break;
    }
    case Setup::hardy_weinberg: {
      auto sample = hardy_weinberg_latent(spec.effective_n(), latent_seed);
      inst.Y = sample_rdpg(sample.positions, graph_seed, spec.self_loops);
      inst.truth = std::move(sample.positions);
      break;
    }
    case Setup::edge_list_file: {
      inst.Y = read_edge_list(spec.edge_list, EdgeListOptions{!spec.self_loops});
      if (!spec.labels.empty()) {
        inst.labels = read_labels(spec.labels);
        if (static_cast<Eigen::Index>(inst.labels.size()) != inst.Y.n())
          throw SpecError("label file has " + std::to_string(inst.labels.size()) + " labels for " +
                          std::to_string(inst.Y.n()) + " vertices");
      }
      break;
    }
  }
  return inst;
}

std::uint64_t method_stream(Method m) { return 10 + static_cast<std::uint64_t>(m); }

}  // namespace

std::string to_string(Setup setup) { return name_of(kSetups, setup); }
std::string to_string(Method method) { return name_of(kMethods, method); }
std::string to_string(Metric metric) { return name_of(kMetrics, metric); }
Setup parse_setup(const std::string& name) { return parse_name(kSetups, name, "setup"); }
Method parse_method(const std::string& name) { return parse_name(kMethods, name, "method"); }
Metric parse_metric(const std::string& name) { return parse_name(kMetrics, name, "metric"); }

int ExperimentSpec::blocks() const {
  switch (setup) {
    case Setup::sbm_table1_k3: return 3;
    case Setup::sbm_table1_k5: return 5;
    case Setup::sbm_table1_k7: return 7;
    default: return 0;
  }
}

int ExperimentSpec::clusters() const { return kmeans_K > 0 ? kmeans_K : blocks(); }

Eigen::Index ExperimentSpec::effective_n() const {
  Eigen::Index base = n;
  if (base == 0) {
    if (blocks() > 0) base = table1_default_n(blocks());
    else if (setup == Setup::hardy_weinberg) base = 2000;
  }
  return static_cast<Eigen::Index>(std::llround(static_cast<double>(base) * scale));
}

ChainConfig ExperimentSpec::effective_chain() const {
  ChainConfig c = chain;
  c.iterations = static_cast<int>(std::llround(chain.iterations * scale));
  c.burn_in = static_cast<int>(std::llround(chain.burn_in * scale));
  return c;
}

std::vector<Metric> ExperimentSpec::effective_metrics() const {
  std::vector<Metric> supported;
  const bool synthetic = setup != Setup::edge_list_file;
  const bool has_labels = blocks() > 0 || (setup == Setup::edge_list_file && !labels.empty());
  if (synthetic) {
    supported.push_back(Metric::procrustes_loss);
    supported.push_back(Metric::edge_prob_error);
  }
  if (has_labels && clusters() > 0) {
    supported.push_back(Metric::rand_index);
    if (clusters() <= 8) supported.push_back(Metric::misclustered);
  }
  if (metrics.empty()) return supported;
  for (Metric m : metrics)
    if (!contains(supported, m))
      throw SpecError("metric " + to_string(m) + " is not available for setup " + to_string(setup));
  return metrics;
}

void ExperimentSpec::validate() const {
  if (replicates < 1) throw SpecError("replicates must be >= 1");
  if (methods.empty()) throw SpecError("at least one method is required");
  if (!(scale > 0.0)) throw SpecError("scale must be positive");
  if (n < 0) throw SpecError("n must be nonnegative");
  if (d && *d < 1) throw SpecError("d must be >= 1 or auto");
  if (!(gse_sigma > 0.0)) throw SpecError("gse_sigma must be positive");
  if (kmeans_K < 0) throw SpecError("kmeans_K must be nonnegative");
  if (kmeans_restarts < 1) throw SpecError("kmeans_restarts must be >= 1");
  if (setup == Setup::edge_list_file) {
    if (edge_list.empty()) throw SpecError("edge_list_file setup needs an edge list path");
  } else {
    const auto size = effective_n();
    if (size < 3) throw SpecError("n is too small after scaling");
    if (blocks() > 0 && size < blocks()) throw SpecError("n must be at least K");
    if (d && *d > size) throw SpecError("d exceeds n");
  }
  const bool sampled = std::any_of(methods.begin(), methods.end(), [](Method m) { return m != Method::ase; });
  if (sampled) {
    try {
      effective_chain().validate();
    } catch (const std::invalid_argument& e) {
      throw SpecError(std::string("chain: ") + e.what());
    }
  }
  (void)effective_metrics();
}

json ExperimentSpec::to_json() const {
  json methods_json = json::array(), metrics_json = json::array();
  for (Method m : methods) methods_json.push_back(to_string(m));
  for (Metric m : metrics) metrics_json.push_back(to_string(m));
  return {{"format", "rdpg-experiment"},
          {"version", kSpecVersion},
          {"setup", to_string(setup)},
          {"n", n},
          {"d", d ? json(*d) : json("auto")},
          {"methods", methods_json},
          {"metrics", metrics_json},
          {"replicates", replicates},
          {"chain", chain_json(chain)},
          {"gse_sigma", gse_sigma},
          {"kmeans_K", kmeans_K},
          {"kmeans_restarts", kmeans_restarts},
          {"seed", seed},
          {"scale", scale},
          {"self_loops", self_loops},
          {"edge_list", edge_list},
          {"labels", labels}};
}

ExperimentSpec ExperimentSpec::from_json(const json& j) {
  try {
    if (j.contains("format") && j.at("format") != "rdpg-experiment") throw SpecError("not an rdpg experiment spec");
    if (j.value("version", kSpecVersion) != kSpecVersion) throw SpecError("unsupported spec version");
    ExperimentSpec s;
    if (j.contains("setup")) s.setup = parse_setup(j.at("setup").get<std::string>());
    s.n = j.value("n", s.n);
    if (j.contains("d")) {
      const auto& d = j.at("d");
      if (d.is_string()) {
        if (d.get<std::string>() != "auto") throw SpecError("d must be an integer or \"auto\"");
        s.d.reset();
      } else {
        s.d = d.get<int>();
      }
    }
    if (j.contains("methods")) {
      s.methods.clear();
      for (const auto& m : j.at("methods")) s.methods.push_back(parse_method(m.get<std::string>()));
    }
    if (j.contains("metrics"))
      for (const auto& m : j.at("metrics")) s.metrics.push_back(parse_metric(m.get<std::string>()));
    s.replicates = j.value("replicates", s.replicates);
    if (j.contains("chain")) s.chain = chain_from_json(j.at("chain"));
    s.gse_sigma = j.value("gse_sigma", s.gse_sigma);
    s.kmeans_K = j.value("kmeans_K", s.kmeans_K);
    s.kmeans_restarts = j.value("kmeans_restarts", s.kmeans_restarts);
    s.seed = j.value("seed", s.seed);
    s.scale = j.value("scale", s.scale);
    s.self_loops = j.value("self_loops", s.self_loops);
    s.edge_list = j.value("edge_list", s.edge_list);
    s.labels = j.value("labels", s.labels);
    return s;
  } catch (const json::exception& e) {
    throw SpecError(std::string("malformed experiment spec: ") + e.what());
  }
}

Statistic summarize(const std::vector<double>& values) {
  Statistic s;
  s.count = static_cast<int>(values.size());
  if (values.empty()) return s;
  for (double v : values) s.mean += v;
  s.mean /= s.count;
  if (s.count > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / (s.count - 1));
  }
  return s;
}

Matrix truth_overlay(Setup setup) {
  switch (setup) {
    case Setup::sbm_table1_k3: return table1_block_positions(3);
    case Setup::sbm_table1_k5: return table1_block_positions(5);
    case Setup::sbm_table1_k7: return table1_block_positions(7);
    case Setup::hardy_weinberg: {
      constexpr int kPoints = 200;
      Matrix curve(kPoints, 3);
      for (int k = 0; k < kPoints; ++k)
        curve.row(k) = hardy_weinberg_point(static_cast<double>(k) / (kPoints - 1)).transpose();
      return curve;
    }
    case Setup::edge_list_file: break;
  }
  return {};
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  const auto metrics = spec.effective_metrics();
  const ChainConfig chain = spec.effective_chain();
  const int K = spec.clusters();
  const auto method_count = spec.methods.size();

  ExperimentResult result;
  result.spec = spec;
  result.truth_overlay = truth_overlay(spec.setup);
  result.records.resize(method_count * static_cast<std::size_t>(spec.replicates));
  std::vector<std::optional<EmbeddingExport>> exports(method_count);

  parallel_for(
      result.records.size(),
      [&](std::size_t task) {
        const int r = static_cast<int>(task / method_count);
        const Method method = spec.methods[task % method_count];
        const auto start = std::chrono::steady_clock::now();
        const Instance inst = make_instance(spec, r);
        const int d = spec.d ? *spec.d : elbow_dimension(singular_values(inst.Y.values()));

        ReplicateRecord rec;
        rec.replicate = r;
        rec.method = method;
        rec.d = d;
        ChainConfig cfg = chain;
        cfg.seed = derive_seed(spec.seed, static_cast<std::uint64_t>(r), method_stream(method));
        LatentMatrix embedding;
        switch (method) {
          case Method::ase:
            embedding = adjacency_spectral_embedding(inst.Y, d);
            break;
          case Method::pse: {
            cfg.target = Target::pse;
            const auto summary = run_chain(inst.Y, d, PriorSpec::uniform(), cfg);
            rec.acceptance_rate = summary.acceptance_rate;
            embedding = point_estimator(summary, d);
            break;
          }
          case Method::gse: {
            const auto summary = run_gse_chain(inst.Y, d, spec.gse_sigma, cfg);
            rec.acceptance_rate = summary.acceptance_rate;
            embedding = point_estimator(summary, d);
            break;
          }
        }

        Matrix aligned = embedding.values();
        if (inst.truth) {
          auto [est, truth] = pad_to_common_width(embedding.values(), inst.truth->values());
          const AlignmentResult fit = procrustes(est, truth);
          if (contains(metrics, Metric::procrustes_loss)) rec.procrustes_loss = fit.loss;
          if (contains(metrics, Metric::edge_prob_error))
            rec.edge_prob_error = edge_prob_error(embedding.values(), inst.truth->values());
          aligned = (est * fit.rotation.transpose()).leftCols(inst.truth->d());
        }
        if (K > 0) {
          KMeansOptions opts;
          opts.restarts = spec.kmeans_restarts;
          opts.seed = derive_seed(spec.seed, static_cast<std::uint64_t>(r), 20 + method_stream(method));
          opts.workers = 1;
          const auto clustering = kmeans(embedding.values(), K, opts);
          rec.cluster_sizes.assign(static_cast<std::size_t>(K), 0);
          for (int l : clustering.assignment.labels) ++rec.cluster_sizes[l - 1];
          if (contains(metrics, Metric::rand_index))
            rec.rand_index = rand_index(clustering.assignment.labels, inst.labels);
          if (contains(metrics, Metric::misclustered))
            rec.misclustered = min_permutation_hamming(clustering.assignment.labels, inst.labels, K);
        }
        rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (r == 0) exports[task % method_count] = EmbeddingExport{method, std::move(aligned), inst.labels};
        result.records[task] = std::move(rec);
      },
      spec.workers);

  {
    const Instance first = make_instance(spec, 0);
    result.scree = singular_values(first.Y.values());
    result.elbow = elbow_dimension(result.scree);
  }
  for (auto& e : exports)
    if (e) result.embeddings.push_back(std::move(*e));

  for (std::size_t m = 0; m < method_count; ++m) {
    MethodSummary summary;
    summary.method = spec.methods[m];
    std::vector<double> loss, edge, ri, mis;
    for (std::size_t r = 0; r < static_cast<std::size_t>(spec.replicates); ++r) {
      const auto& rec = result.records[r * method_count + m];
      if (rec.procrustes_loss) loss.push_back(*rec.procrustes_loss);
      if (rec.edge_prob_error) edge.push_back(*rec.edge_prob_error);
      if (rec.rand_index) ri.push_back(*rec.rand_index);
      if (rec.misclustered) mis.push_back(*rec.misclustered);
      summary.seconds += rec.seconds;
    }
    if (!loss.empty()) summary.procrustes_loss = summarize(loss);
    if (!edge.empty()) summary.edge_prob_error = summarize(edge);
    if (!ri.empty()) summary.rand_index = summarize(ri);
    if (!mis.empty()) summary.misclustered = summarize(mis);
    result.summaries.push_back(summary);
  }
  return result;
}

json ExperimentResult::to_json(bool with_timing) const {
  json records_json = json::array();
  for (const auto& rec : records) {
    json r = {{"replicate", rec.replicate},
              {"method", to_string(rec.method)},
              {"d", rec.d},
              {"procrustes_loss", optional_json(rec.procrustes_loss)},
              {"edge_prob_error", optional_json(rec.edge_prob_error)},
              {"rand_index", optional_json(rec.rand_index)},
              {"misclustered", optional_json(rec.misclustered)},
              {"acceptance_rate", optional_json(rec.acceptance_rate)},
              {"cluster_sizes", rec.cluster_sizes}};
    if (with_timing) r["seconds"] = rec.seconds;
    records_json.push_back(std::move(r));
  }
  json summaries_json = json::array();
  for (const auto& s : summaries) {
    json entry = {{"method", to_string(s.method)},
                  {"procrustes_loss", statistic_json(s.procrustes_loss)},
                  {"edge_prob_error", statistic_json(s.edge_prob_error)},
                  {"rand_index", statistic_json(s.rand_index)},
                  {"misclustered", statistic_json(s.misclustered)}};
    if (with_timing) entry["seconds"] = s.seconds;
    summaries_json.push_back(std::move(entry));
  }
  std::vector<double> scree_values(scree.data(), scree.data() + scree.size());
  return {{"spec", spec.to_json()},
          {"effective", {{"n", spec.effective_n()}, {"chain", chain_json(spec.effective_chain())}}},
          {"summaries", summaries_json},
          {"records", records_json},
          {"elbow", elbow},
          {"scree", scree_values}};
}

std::string ExperimentResult::summary_csv() const {
  std::ostringstream out;
  out << std::setprecision(10);
  out << "method,procrustes_loss_mean,procrustes_loss_sd,edge_prob_error_mean,edge_prob_error_sd,"
         "rand_index_mean,rand_index_sd,misclustered_mean,misclustered_sd,replicates\n";
  auto cell = [&out](const std::optional<Statistic>& s) {
    if (s) out << ',' << s->mean << ',' << s->sd;
    else out << ",,";
  };
  for (const auto& s : summaries) {
    out << to_string(s.method);
    cell(s.procrustes_loss);
    cell(s.edge_prob_error);
    cell(s.rand_index);
    cell(s.misclustered);
    out << ',' << spec.replicates << '\n';
  }
  return out.str();
}

std::string ExperimentResult::records_csv() const {
  std::ostringstream out;
  out << std::setprecision(10);
  out << "replicate,method,d,procrustes_loss,edge_prob_error,rand_index,misclustered,acceptance_rate\n";
  auto cell = [&out](const std::optional<double>& v) {
    out << ',';
    if (v) out << *v;
  };
  for (const auto& rec : records) {
    out << rec.replicate << ',' << to_string(rec.method) << ',' << rec.d;
    cell(rec.procrustes_loss);
    cell(rec.edge_prob_error);
    cell(rec.rand_index);
    cell(rec.misclustered);
    cell(rec.acceptance_rate);
    out << '\n';
  }
  return out.str();
}

void export_embedding_csv(const std::filesystem::path& path, const Matrix& coordinates,
                          const std::vector<int>& labels) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << std::setprecision(17) << "vertex";
  for (Eigen::Index c = 0; c < coordinates.cols(); ++c) out << ",x" << c + 1;
  out << ",label\n";
  for (Eigen::Index i = 0; i < coordinates.rows(); ++i) {
    out << i;
    for (Eigen::Index c = 0; c < coordinates.cols(); ++c) out << ',' << coordinates(i, c);
    out << ',';
    if (!labels.empty()) out << labels[i];
    out << '\n';
  }
}

void export_scree_csv(const std::filesystem::path& path, const Vector& values) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << std::setprecision(17) << "index,value\n";
  for (Eigen::Index k = 0; k < values.size(); ++k) out << k + 1 << ',' << values(k) << '\n';
}

void export_truth_csv(const std::filesystem::path& path, const Matrix& truth) {
  std::vector<std::string> header;
  for (Eigen::Index c = 0; c < truth.cols(); ++c) header.push_back("x" + std::to_string(c + 1));
  write_matrix_csv(path, truth, header);
}

void write_result_files(const std::filesystem::path& dir, const ExperimentResult& result) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "results.json");
    if (!out) throw std::runtime_error("cannot write " + (dir / "results.json").string());
    out << std::setw(2) << result.to_json() << '\n';
  }
  std::ofstream(dir / "summary.csv") << result.summary_csv();
  std::ofstream(dir / "records.csv") << result.records_csv();
  export_scree_csv(dir / "scree.csv", result.scree);
  if (result.truth_overlay.size() > 0) export_truth_csv(dir / "truth.csv", result.truth_overlay);
  for (const auto& e : result.embeddings)
    export_embedding_csv(dir / ("embedding_" + to_string(e.method) + ".csv"), e.coordinates, e.labels);
}

}  // namespace rdpg
