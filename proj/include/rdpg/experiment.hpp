#pragma once

#include "rdpg/mcmc.hpp"
#include "rdpg/types.hpp"

#include "json.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace rdpg {

enum class Setup { sbm_table1_k3, sbm_table1_k5, sbm_table1_k7, hardy_weinberg, edge_list_file };
enum class Method { ase, pse, gse };
enum class Metric { procrustes_loss, edge_prob_error, rand_index, misclustered };

std::string to_string(Setup setup);
std::string to_string(Method method);
std::string to_string(Metric metric);
Setup parse_setup(const std::string& name);
Method parse_method(const std::string& name);
Metric parse_metric(const std::string& name);

/// Thrown for invalid experiment specs (CLI exit code 2).
class SpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Everything needed to rerun an experiment. Serialized as JSON
/// ("format": "rdpg-experiment", "version": 1).
struct ExperimentSpec {
  Setup setup = Setup::sbm_table1_k3;
  Eigen::Index n = 0;           // 0: setup default (600/1000/1400, 2000 for Hardy-Weinberg)
  std::optional<int> d;         // nullopt: scree elbow
  std::vector<Method> methods{Method::ase, Method::pse, Method::gse};
  std::vector<Metric> metrics;  // empty: every metric the setup supports
  int replicates = 1;
  ChainConfig chain;
  double gse_sigma = 10.0;
  int kmeans_K = 0;             // 0: number of blocks (no clustering for Hardy-Weinberg)
  int kmeans_restarts = 20;
  std::uint64_t seed = 0;
  double scale = 1.0;           // multiplies n and the chain lengths
  bool self_loops = true;
  std::string edge_list;        // edge_list_file setup
  std::string labels;           // optional reference labels for edge lists
  unsigned workers = 0;         // 0 = hardware concurrency; does not affect results

  /// Throws SpecError.
  void validate() const;

  Eigen::Index effective_n() const;
  ChainConfig effective_chain() const;
  int blocks() const;  // K of the SBM setups, 0 otherwise
  int clusters() const;
  std::vector<Metric> effective_metrics() const;

  nlohmann::json to_json() const;
  static ExperimentSpec from_json(const nlohmann::json& j);
};

struct ReplicateRecord {
  int replicate = 0;
  Method method = Method::ase;
  int d = 0;
  std::optional<double> procrustes_loss;
  std::optional<double> edge_prob_error;
  std::optional<double> rand_index;
  std::optional<double> misclustered;
  std::optional<double> acceptance_rate;
  std::vector<int> cluster_sizes;
  double seconds = 0.0;
};

struct Statistic {
  double mean = 0.0;
  double sd = 0.0;
  int count = 0;
};

struct MethodSummary {
  Method method = Method::ase;
  std::optional<Statistic> procrustes_loss;
  std::optional<Statistic> edge_prob_error;
  std::optional<Statistic> rand_index;
  std::optional<Statistic> misclustered;
  double seconds = 0.0;
};

/// Embedding of replicate 0, rotated onto the truth when one exists.
struct EmbeddingExport {
  Method method = Method::ase;
  Matrix coordinates;
  std::vector<int> labels;  // truth (or reference) labels, empty if none
};

struct ExperimentResult {
  ExperimentSpec spec;
  std::vector<ReplicateRecord> records;  // sorted by (replicate, method order)
  std::vector<MethodSummary> summaries;  // one per method, in spec order
  Vector scree;                          // singular values of replicate 0
  int elbow = 0;
  std::vector<EmbeddingExport> embeddings;
  Matrix truth_overlay;  // block positions or the Hardy-Weinberg curve

  /// with_timing = false drops wall-clock fields, leaving a value that is a
  /// pure function of the experiment spec.
  nlohmann::json to_json(bool with_timing = true) const;
  /// Flat table: one row per method with mean/sd columns.
  std::string summary_csv() const;
  /// One row per (replicate, method).
  std::string records_csv() const;
};

ExperimentResult run_experiment(const ExperimentSpec& spec);

/// Summary statistic helper (sample standard deviation, 0 for one value).
Statistic summarize(const std::vector<double>& values);

// Plot data. Every file is CSV with a header line.
void export_embedding_csv(const std::filesystem::path& path, const Matrix& coordinates,
                          const std::vector<int>& labels);
void export_scree_csv(const std::filesystem::path& path, const Vector& singular_values);
void export_truth_csv(const std::filesystem::path& path, const Matrix& truth);

/// Block positions for SBM setups or 200 points of the Hardy-Weinberg curve.
Matrix truth_overlay(Setup setup);

/// Writes results.json, summary.csv, records.csv, scree.csv, truth.csv and
/// embedding_<method>.csv into dir.
void write_result_files(const std::filesystem::path& dir, const ExperimentResult& result);

}  // namespace rdpg
