#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "topo/chc.hpp"
#include "topo/field.hpp"
#include "topo/process.hpp"

namespace topo {

/// Resolved configuration of a classification experiment; defaults are the
/// desk-scale setup.  Presets live under presets/ as JSON files.
struct ExperimentConfig {
  std::vector<double> masses{0.0, 0.2, 0.4};
  int runs_per_mass = 12;    // R
  int training_runs = 6;     // R_T
  int snapshots = 10;        // M
  int modes = 64;            // K
  int grid = 128;            // output grid per side
  long steps = 4000;
  double epsilon = 0.005;
  double sigma = 0.001;
  int levels = 256;
  double lo = -1.0;
  double hi = 1.0;
  double p = 1.0;            // 1, 2 or infinity
  std::string scheme = "ca"; // c0 | c1 | ca
  std::uint64_t base_seed = 1;
  int wrong_threshold = 4;   // |n - n_true| beyond this bins as Wrong
};

ExperimentConfig load_config(const std::string& json_path);
void apply_config_override(ExperimentConfig& cfg, const std::string& key,
                           const std::string& value);
void validate_config(const ExperimentConfig& cfg);
std::string config_json(const ExperimentConfig& cfg);

LevelQuantizer config_quantizer(const ExperimentConfig& cfg);
std::string mass_label(double mass);

/// Seed of trajectory (mass_index, run_index) under a base seed: recorded in
/// every archive manifest so runs are reproducible in isolation.
std::uint64_t run_seed(std::uint64_t base_seed, int mass_index, int run_index);

/// Snapshot archive: a directory holding manifest.txt (plain-text key-value
/// parameters, seed, times) and one binary field file per snapshot.
struct SnapshotArchive {
  ChcParams params;
  int grid = 0;
  std::string mass_label;
  std::vector<double> times;
  std::vector<std::string> field_files;  // relative names, snapshot order
};

void write_archive(const std::string& dir, const ChcParams& params, int grid,
                   const std::string& mass_label,
                   const std::vector<double>& times,
                   const std::vector<ScalarField2D>& fields);
SnapshotArchive read_archive(const std::string& dir);
ScalarField2D read_archive_field(const std::string& dir,
                                 const SnapshotArchive& a, std::size_t i);

/// Simulate every (mass, run) trajectory of the config and write one archive
/// per run under out_dir/mass_<label>/run_<idx>/.
void cmd_generate(const ExperimentConfig& cfg, const std::string& out_dir);

/// Quantize each snapshot, compute sublevel persistence, and assemble the
/// landscape pair sequence of one archive.
TopologicalProcess process_from_archive(const std::string& archive_dir,
                                        const LevelQuantizer& q);
void cmd_topology(const std::string& archive_dir, const std::string& out_file,
                  const LevelQuantizer& q);
/// Batch variant over out_root/mass_*/run_*; returns processed count.
int cmd_topology_root(const std::string& root, const std::string& out_dir,
                      const LevelQuantizer& q);

/// Process files of a dataset directory grouped by mass label; file-name
/// order within a group is run order.
std::map<std::string, std::vector<std::string>> list_process_files(
    const std::string& dir);

void cmd_train(const std::string& processes_dir, const ExperimentConfig& cfg,
               const std::string& model_dir);

struct ClassifyRow {
  std::string file;
  std::string true_label;  // empty when unknown
  int predicted = -1;      // -1 = Failure
};
std::vector<ClassifyRow> cmd_classify(const std::string& model_dir,
                                      const std::vector<std::string>& files,
                                      const std::string& scheme,
                                      const std::string& out_csv);

struct EvalReport {
  long hits = 0;
  std::vector<long> missed_by;  // index 0 -> missed by 1, ...
  long wrong = 0;               // beyond threshold
  long failures = 0;            // classifier returned Failure (binned Wrong)
  long total = 0;

  double hit_rate() const {
    return total ? static_cast<double>(hits) / total : 0.0;
  }
};
/// Classify the non-training runs against the model and bin |n - n_true|.
EvalReport cmd_evaluate(const std::string& model_dir,
                        const std::string& processes_dir,
                        const ExperimentConfig& cfg,
                        const std::string& out_prefix);

/// Pairwise distance matrix between averaged classifiers (both homology
/// dimensions summed), as CSV and a PGM rendering.
Eigen::ArrayXXd cmd_heatmap(const std::string& model_dir,
                            const std::string& out_prefix);

struct TimeClassifyReport {
  std::vector<std::string> mass_labels;           // columns
  Eigen::ArrayXXd hit, miss1, missge2;            // rows = snapshot index
  long total_queries = 0;
};
/// Classify single snapshots against per-snapshot-time classes (scheme c0 or
/// c1); writes frequency grids as CSV and PGM plus a text report.
TimeClassifyReport cmd_time_classify(const std::string& processes_dir,
                                     const ExperimentConfig& cfg,
                                     const std::string& out_prefix);

}  // namespace topo
