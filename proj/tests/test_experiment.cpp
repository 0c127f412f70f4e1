#include "doctest.h"

#include "rdpg/experiment.hpp"
#include "rdpg/graph_io.hpp"
#include "rdpg/model.hpp"
#include "rdpg/spectral.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace rdpg;
namespace fs = std::filesystem;

namespace {

ExperimentSpec small_spec() {
  ExperimentSpec spec;
  spec.setup = Setup::sbm_table1_k3;
  spec.scale = 0.1;
  spec.d = 2;
  spec.replicates = 2;
  spec.seed = 42;
  spec.kmeans_restarts = 3;
  return spec;
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "rdpg_experiment_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int count_lines(const fs::path& path) {
  std::ifstream in(path);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  return lines;
}

}  // namespace

TEST_CASE("spec validation") {
  ExperimentSpec spec = small_spec();
  CHECK_NOTHROW(spec.validate());
  spec.replicates = 0;
  CHECK_THROWS_AS(spec.validate(), SpecError);

  spec = small_spec();
  spec.chain.iterations = spec.chain.burn_in;
  CHECK_THROWS_AS(spec.validate(), SpecError);
  spec.methods = {Method::ase};
  CHECK_NOTHROW(spec.validate());

  spec = small_spec();
  spec.setup = Setup::edge_list_file;
  spec.edge_list = "graph.txt";
  spec.metrics = {Metric::procrustes_loss};
  CHECK_THROWS_AS(spec.validate(), SpecError);

  spec = small_spec();
  spec.setup = Setup::hardy_weinberg;
  spec.metrics = {Metric::rand_index};
  CHECK_THROWS_AS(spec.validate(), SpecError);

  CHECK_THROWS_AS(parse_method("mle"), SpecError);
  CHECK(parse_setup("hardy_weinberg") == Setup::hardy_weinberg);
}

TEST_CASE("scale multiplies n and the chain lengths") {
  ExperimentSpec spec;
  CHECK(spec.effective_n() == 600);
  spec.scale = 0.25;
  CHECK(spec.effective_n() == 150);
  const auto chain = spec.effective_chain();
  CHECK(chain.iterations == 3750);
  CHECK(chain.burn_in == 1250);
  CHECK(chain.thin == 10);
  spec.setup = Setup::hardy_weinberg;
  spec.scale = 1.0;
  CHECK(spec.effective_n() == 2000);
  spec.setup = Setup::sbm_table1_k7;
  CHECK(spec.effective_n() == 1400);
}

TEST_CASE("spec JSON round trip") {
  ExperimentSpec spec = small_spec();
  spec.metrics = {Metric::rand_index, Metric::procrustes_loss};
  spec.chain.step_size = 0.07;
  spec.gse_sigma = 3.5;
  spec.self_loops = false;
  const auto back = ExperimentSpec::from_json(spec.to_json());
  CHECK(back.to_json() == spec.to_json());
  CHECK(back.d == spec.d);
  spec.d.reset();
  CHECK_FALSE(ExperimentSpec::from_json(spec.to_json()).d.has_value());

  CHECK_THROWS_AS(ExperimentSpec::from_json(nlohmann::json{{"format", "other"}}), SpecError);
  CHECK_THROWS_AS(ExperimentSpec::from_json(nlohmann::json{{"replicates", "many"}}), SpecError);
}

TEST_CASE("experiments are deterministic and echo their spec") {
  ExperimentSpec spec = small_spec();
  spec.chain.iterations = 600;
  spec.chain.burn_in = 200;
  const auto a = run_experiment(spec);
  spec.workers = 1;
  const auto b = run_experiment(spec);
  CHECK(a.to_json(false) == b.to_json(false));

  const auto rerun = run_experiment(ExperimentSpec::from_json(a.to_json().at("spec")));
  CHECK(rerun.to_json(false) == a.to_json(false));

  CHECK(a.records.size() == 6);
  CHECK(a.summaries.size() == 3);
  for (const auto& rec : a.records) {
    CHECK(rec.procrustes_loss.has_value());
    CHECK(rec.rand_index.has_value());
    CHECK(rec.misclustered.has_value());
    CHECK(rec.d == 2);
    CHECK(rec.acceptance_rate.has_value() == (rec.method != Method::ase));
  }
  CHECK(a.summaries[0].procrustes_loss->count == 2);
}

TEST_CASE("result tables and plot exports") {
  ExperimentSpec spec = small_spec();
  spec.scale = 1.0;
  spec.replicates = 1;
  spec.methods = {Method::ase};
  const auto result = run_experiment(spec);
  const auto dir = scratch_dir("k3");
  write_result_files(dir, result);
  CHECK(count_lines(dir / "embedding_ase.csv") == 601);
  CHECK(count_lines(dir / "truth.csv") == 4);
  CHECK(count_lines(dir / "summary.csv") == 2);
  CHECK(count_lines(dir / "records.csv") == 2);
  CHECK(fs::exists(dir / "results.json"));
  CHECK(result.scree.size() == 600);
  CHECK(result.elbow == elbow_dimension(result.scree));

  const std::string summary = result.summary_csv();
  CHECK(summary.rfind("method,procrustes_loss_mean", 0) == 0);
  CHECK(summary.find("\nase,") != std::string::npos);

  Vector diag(3);
  diag << 3, 2, 1;
  export_scree_csv(dir / "scree_small.csv", diag);
  CHECK(count_lines(dir / "scree_small.csv") == 4);

  const Matrix curve = truth_overlay(Setup::hardy_weinberg);
  CHECK(curve.row(0) == Eigen::RowVector3d(0, 1, 0));
  CHECK(curve.row(curve.rows() - 1) == Eigen::RowVector3d(1, 0, 0));
}

TEST_CASE("edge-list experiments") {
  const auto dir = scratch_dir("edges");
  auto [X, truth] = sbm_to_latent(table1_sbm(3), 90, 5);
  const auto Y = sample_rdpg(X, 6, false);
  {
    std::ofstream out(dir / "graph.txt");
    write_edge_list(out, Y);
  }
  write_labels(dir / "labels.txt", truth.labels);

  ExperimentSpec spec;
  spec.setup = Setup::edge_list_file;
  spec.edge_list = (dir / "graph.txt").string();
  spec.labels = (dir / "labels.txt").string();
  spec.kmeans_K = 3;
  spec.methods = {Method::ase};
  spec.self_loops = false;
  const auto result = run_experiment(spec);
  REQUIRE(result.records.size() == 1);
  CHECK_FALSE(result.records[0].procrustes_loss.has_value());
  CHECK(result.records[0].rand_index.has_value());
  CHECK(result.records[0].d >= 1);

  write_labels(dir / "short.txt", {1, 2, 3});
  spec.labels = (dir / "short.txt").string();
  CHECK_THROWS_AS(run_experiment(spec), SpecError);
}

TEST_CASE("summary statistics") {
  const auto s = summarize({1.0, 2.0, 3.0});
  CHECK(s.mean == doctest::Approx(2.0));
  CHECK(s.sd == doctest::Approx(1.0));
  CHECK(summarize({5.0}).sd == 0.0);
}
