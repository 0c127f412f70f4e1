// Command-line front end: generate graphs, embed, cluster, evaluate, run
// benchmarks and export scree data.

#include "rdpg/align.hpp"
#include "rdpg/cluster.hpp"
#include "rdpg/experiment.hpp"
#include "rdpg/graph_io.hpp"
#include "rdpg/mcmc.hpp"
#include "rdpg/model.hpp"
#include "rdpg/parallel.hpp"
#include "rdpg/spectral.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitSpecError = 2;

struct Options {
  std::string config;
  std::string setup = "sbm_table1_k3";
  long long n = 0;
  std::string d = "auto";
  std::vector<std::string> methods;
  int replicates = 1;
  std::uint64_t seed = 0;
  double scale = 1.0;
  std::string out;
  std::string edge_list;
  std::string labels;
  bool no_self_loops = false;
  int K = 0;
  int restarts = 20;
  int iterations = 15000;
  int burn_in = 5000;
  int thin = 10;
  double sigma = 10.0;
  std::string embedding;
  std::string truth;
  std::string reference;
  unsigned workers = 0;
};

std::optional<int> parse_dimension(const std::string& d) {
  if (d == "auto") return std::nullopt;
  std::size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(d, &used);
  } catch (const std::exception&) {
    throw rdpg::SpecError("--d must be a positive integer or 'auto'");
  }
  if (used != d.size() || value < 1) throw rdpg::SpecError("--d must be a positive integer or 'auto'");
  return value;
}

rdpg::ChainConfig chain_from(const Options& o) {
  rdpg::ChainConfig c;
  c.iterations = o.iterations;
  c.burn_in = o.burn_in;
  c.thin = o.thin;
  return c;
}

rdpg::ExperimentSpec spec_from(const Options& o) {
  rdpg::ExperimentSpec spec;
  if (!o.config.empty()) {
    std::ifstream in(o.config);
    if (!in) throw rdpg::SpecError("cannot open config " + o.config);
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw rdpg::SpecError(std::string("config is not valid JSON: ") + e.what());
    }
    // A results.json carries its spec under "spec".
    spec = rdpg::ExperimentSpec::from_json(j.contains("spec") ? j.at("spec") : j);
    spec.workers = o.workers;
    return spec;
  }
  spec.setup = o.edge_list.empty() ? rdpg::parse_setup(o.setup) : rdpg::Setup::edge_list_file;
  spec.n = o.n;
  spec.d = parse_dimension(o.d);
  if (!o.methods.empty()) {
    spec.methods.clear();
    for (const auto& m : o.methods) spec.methods.push_back(rdpg::parse_method(m));
  }
  spec.replicates = o.replicates;
  spec.chain = chain_from(o);
  spec.gse_sigma = o.sigma;
  spec.kmeans_K = o.K;
  spec.kmeans_restarts = o.restarts;
  spec.seed = o.seed;
  spec.scale = o.scale;
  spec.self_loops = !o.no_self_loops;
  spec.edge_list = o.edge_list;
  spec.labels = o.labels;
  spec.workers = o.workers;
  return spec;
}

rdpg::AdjacencyMatrix load_graph(const Options& o) {
  if (o.edge_list.empty()) throw rdpg::SpecError("--edge-list is required");
  return rdpg::read_edge_list(o.edge_list, rdpg::EdgeListOptions{o.no_self_loops});
}

int cmd_generate(const Options& o) {
  rdpg::ExperimentSpec spec = spec_from(o);
  spec.methods = {rdpg::Method::ase};
  if (spec.setup == rdpg::Setup::edge_list_file) throw rdpg::SpecError("generate needs a synthetic --setup");
  spec.validate();
  if (o.out.empty()) throw rdpg::SpecError("--out directory is required");
  fs::create_directories(o.out);

  const auto n = spec.effective_n();
  rdpg::LatentMatrix X0;
  std::vector<int> labels;
  if (spec.setup == rdpg::Setup::hardy_weinberg) {
    X0 = rdpg::hardy_weinberg_latent(n, spec.seed).positions;
  } else {
    auto [X, truth] = rdpg::sbm_to_latent(rdpg::table1_sbm(spec.blocks()), n, spec.seed);
    X0 = std::move(X);
    labels = std::move(truth.labels);
  }
  const auto Y = rdpg::sample_rdpg(X0, rdpg::derive_seed(spec.seed, 0, 1), spec.self_loops);
  std::ofstream edges(fs::path(o.out) / "edges.txt");
  rdpg::write_edge_list(edges, Y);
  std::vector<std::string> header;
  for (Eigen::Index c = 0; c < X0.d(); ++c) header.push_back("x" + std::to_string(c + 1));
  rdpg::write_matrix_csv(fs::path(o.out) / "latent.csv", X0.values(), header);
  if (!labels.empty()) rdpg::write_labels(fs::path(o.out) / "labels.txt", labels);
  std::cout << "generated n=" << n << " edges=" << Y.edge_count() << " into " << o.out << '\n';
  return 0;
}

int cmd_embed(const Options& o) {
  const auto Y = load_graph(o);
  auto d = parse_dimension(o.d);
  if (!d) {
    const rdpg::Vector s = rdpg::singular_values(Y.values());
    d = rdpg::elbow_dimension(s);
  }
  if (*d > Y.n()) throw rdpg::SpecError("--d exceeds the vertex count");
  const std::string method = o.methods.empty() ? "ase" : o.methods.front();
  rdpg::ChainConfig cfg = chain_from(o);
  cfg.seed = o.seed;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw rdpg::SpecError(e.what());
  }

  rdpg::LatentMatrix X;
  switch (rdpg::parse_method(method)) {
    case rdpg::Method::ase: {
      rdpg::EmbeddingDiagnostics diag;
      X = rdpg::adjacency_spectral_embedding(Y, *d, &diag);
      if (diag.clipped_eigenvalues > 0)
        std::cerr << "warning: " << diag.clipped_eigenvalues << " negative eigenvalue(s) clipped to zero\n";
      break;
    }
    case rdpg::Method::pse: {
      cfg.target = rdpg::Target::pse;
      const auto summary = rdpg::run_chain(Y, *d, rdpg::PriorSpec::uniform(), cfg);
      std::cerr << "acceptance rate " << summary.acceptance_rate << '\n';
      X = rdpg::point_estimator(summary, *d);
      break;
    }
    case rdpg::Method::gse: {
      const auto summary = rdpg::run_gse_chain(Y, *d, o.sigma, cfg);
      std::cerr << "acceptance rate " << summary.acceptance_rate << '\n';
      X = rdpg::point_estimator(summary, *d);
      break;
    }
  }
  std::vector<std::string> header;
  for (Eigen::Index c = 0; c < X.d(); ++c) header.push_back("x" + std::to_string(c + 1));
  const std::string out = o.out.empty() ? "embedding.csv" : o.out;
  rdpg::write_matrix_csv(out, X.values(), header);
  std::cout << "embedded n=" << X.n() << " d=" << X.d() << " method=" << method << " -> " << out << '\n';
  return 0;
}

int cmd_cluster(const Options& o) {
  if (o.embedding.empty()) throw rdpg::SpecError("--embedding is required");
  if (o.K < 1) throw rdpg::SpecError("--K must be >= 1");
  const rdpg::Matrix X = rdpg::read_matrix_csv(o.embedding);
  if (o.K > X.rows()) throw rdpg::SpecError("--K exceeds the number of points");
  rdpg::KMeansOptions opts;
  opts.restarts = o.restarts;
  opts.seed = o.seed;
  const auto result = rdpg::kmeans(X, o.K, opts);
  const std::string out = o.out.empty() ? "labels.txt" : o.out;
  rdpg::write_labels(out, result.assignment.labels);
  json summary = {{"objective", result.objective}, {"iterations", result.iterations}};
  if (!o.labels.empty()) summary["rand_index"] = rdpg::rand_index(result.assignment.labels, rdpg::read_labels(o.labels));
  std::cout << summary.dump() << '\n';
  return 0;
}

int cmd_evaluate(const Options& o) {
  json report = json::object();
  if (!o.embedding.empty() && !o.truth.empty()) {
    const rdpg::Matrix X = rdpg::read_matrix_csv(o.embedding);
    const rdpg::Matrix X0 = rdpg::read_matrix_csv(o.truth);
    if (X.rows() != X0.rows()) throw rdpg::SpecError("embedding and truth disagree on n");
    if (X.cols() == X0.cols()) report["procrustes_loss"] = rdpg::procrustes(X, X0).loss;
    report["edge_prob_error"] = rdpg::edge_prob_error(X, X0);
  }
  if (!o.labels.empty() && !o.reference.empty()) {
    const auto a = rdpg::read_labels(o.labels);
    const auto b = rdpg::read_labels(o.reference);
    if (a.size() != b.size()) throw rdpg::SpecError("label files differ in length");
    report["rand_index"] = rdpg::rand_index(a, b);
    report["misclustered"] = rdpg::min_permutation_hamming(a, b);
  }
  if (report.empty()) throw rdpg::SpecError("evaluate needs --embedding with --truth and/or --labels with --reference");
  if (!o.out.empty()) std::ofstream(o.out) << std::setw(2) << report << '\n';
  std::cout << report.dump() << '\n';
  return 0;
}

int cmd_benchmark(const Options& o) {
  const rdpg::ExperimentSpec spec = spec_from(o);
  spec.validate();
  const auto result = rdpg::run_experiment(spec);
  if (!o.out.empty()) rdpg::write_result_files(o.out, result);
  std::cout << result.summary_csv();
  return 0;
}

int cmd_scree(const Options& o) {
  const auto Y = load_graph(o);
  const rdpg::Vector s = rdpg::singular_values(Y.values());
  const int elbow = rdpg::elbow_dimension(s);
  const std::string out = o.out.empty() ? "scree.csv" : o.out;
  rdpg::export_scree_csv(out, s);
  std::cout << "elbow " << elbow << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Latent position estimation for random dot product graphs"};
  app.require_subcommand(1);
  Options o;

  auto add_graph = [&o](CLI::App* cmd) {
    cmd->add_option("--edge-list", o.edge_list, "Edge list file (\"u v\" per line)");
    cmd->add_flag("--no-self-loops", o.no_self_loops, "Treat the graph as hollow");
  };
  auto add_chain = [&o](CLI::App* cmd) {
    cmd->add_option("--iterations", o.iterations, "MCMC sweeps including burn-in");
    cmd->add_option("--burn-in", o.burn_in, "Discarded sweeps");
    cmd->add_option("--thin", o.thin, "Keep every k-th post burn-in sweep");
    cmd->add_option("--sigma", o.sigma, "Gaussian prior scale for gse");
  };

  auto* generate = app.add_subcommand("generate", "Sample a synthetic graph with its latent positions");
  generate->add_option("--setup", o.setup, "sbm_table1_k3|sbm_table1_k5|sbm_table1_k7|hardy_weinberg");
  generate->add_option("--n", o.n, "Vertex count (default: setup value)");
  generate->add_option("--seed", o.seed);
  generate->add_option("--scale", o.scale, "Multiplier for n");
  generate->add_flag("--no-self-loops", o.no_self_loops, "Do not sample the diagonal");
  generate->add_option("--out", o.out, "Output directory")->required();

  auto* embed = app.add_subcommand("embed", "Embed an edge list with ase, pse or gse");
  add_graph(embed);
  add_chain(embed);
  embed->add_option("--d", o.d, "Embedding dimension or 'auto'");
  embed->add_option("--method", o.methods, "ase|pse|gse")->expected(1);
  embed->add_option("--seed", o.seed);
  embed->add_option("--out", o.out, "Output CSV");

  auto* cluster = app.add_subcommand("cluster", "K-means on an embedding CSV");
  cluster->add_option("--embedding", o.embedding, "Embedding CSV")->required();
  cluster->add_option("--K", o.K, "Number of clusters")->required();
  cluster->add_option("--restarts", o.restarts);
  cluster->add_option("--seed", o.seed);
  cluster->add_option("--labels", o.labels, "Reference labels for a Rand index");
  cluster->add_option("--out", o.out, "Output label file");

  auto* evaluate = app.add_subcommand("evaluate", "Procrustes loss and clustering agreement");
  evaluate->add_option("--embedding", o.embedding, "Estimated positions CSV");
  evaluate->add_option("--truth", o.truth, "True positions CSV");
  evaluate->add_option("--labels", o.labels, "Estimated labels");
  evaluate->add_option("--reference", o.reference, "Reference labels");
  evaluate->add_option("--out", o.out, "JSON report");

  auto* benchmark = app.add_subcommand("benchmark", "Run a replicated simulation experiment");
  add_graph(benchmark);
  add_chain(benchmark);
  benchmark->add_option("--config", o.config, "Experiment spec or results.json (overrides the other flags)");
  benchmark->add_option("--setup", o.setup, "Built-in setup");
  benchmark->add_option("--n", o.n, "Vertex count (default: setup value)");
  benchmark->add_option("--d", o.d, "Embedding dimension or 'auto'");
  benchmark->add_option("--method", o.methods, "ase|pse|gse, repeatable")->delimiter(',');
  benchmark->add_option("--replicates", o.replicates);
  benchmark->add_option("--seed", o.seed);
  benchmark->add_option("--scale", o.scale, "Multiplies n and chain lengths");
  benchmark->add_option("--K", o.K, "K-means clusters (default: block count)");
  benchmark->add_option("--restarts", o.restarts, "K-means restarts");
  benchmark->add_option("--labels", o.labels, "Reference labels for edge lists");
  benchmark->add_option("--workers", o.workers, "Worker threads (0 = all cores)");
  benchmark->add_option("--out", o.out, "Output directory");

  auto* scree = app.add_subcommand("scree", "Singular values of an edge list and the elbow");
  add_graph(scree);
  scree->add_option("--out", o.out, "Output CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitSpecError;
  }

  try {
    if (*generate) return cmd_generate(o);
    if (*embed) return cmd_embed(o);
    if (*cluster) return cmd_cluster(o);
    if (*evaluate) return cmd_evaluate(o);
    if (*benchmark) return cmd_benchmark(o);
    if (*scree) return cmd_scree(o);
  } catch (const rdpg::SpecError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSpecError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
