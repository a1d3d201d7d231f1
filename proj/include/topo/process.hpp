#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "topo/landscape.hpp"

namespace topo {

/// A time-ordered sequence of landscape pairs, one (dimension 0,
/// dimension 1) pair per snapshot.
struct TopologicalProcess {
  std::vector<std::array<PersistenceLandscape, 2>> snapshots;
  // Provenance metadata carried through the pipeline.
  std::string mass_label;
  std::uint64_t seed = 0;
  std::vector<double> times;  // empty or one entry per snapshot

  std::size_t length() const { return snapshots.size(); }
};

/// Averaged classifiers, one process per class, trained at exponent p.
struct ClassifierModel {
  std::vector<TopologicalProcess> classifiers;
  std::vector<std::string> class_labels;
  double p = 1.0;
  int training_runs = 0;                // R_T used to build each classifier
  std::vector<std::uint64_t> seeds;     // seeds of the training runs
};

/// Position-wise average of equal-length processes (the averaged classifier
/// of a class).
TopologicalProcess average_process(const std::vector<TopologicalProcess>& ps);

/// Process distance in homology dimension k: the sum over positions of the
/// landscape L^p distance.  Lengths must agree.
double process_distance(const TopologicalProcess& a,
                        const TopologicalProcess& b, double p, int k);

/// Build a model from per-class training processes (classes[n] holds the
/// training runs of class n, all processes the same length).
ClassifierModel train(const std::vector<std::vector<TopologicalProcess>>& classes,
                      double p, const std::vector<std::string>& labels);

/// Scheme (Ck): nearest averaged classifier in homology dimension k alone;
/// empty result = Failure (tied minimum).
std::optional<int> classify_ck(const ClassifierModel& model,
                               const TopologicalProcess& query, int k);

/// Scheme (CA): order classes by distance separately in each dimension,
/// intersect prefix sets of growing length, and answer only when the first
/// nonempty intersection is a singleton that no tie among the involved
/// distances could disturb; empty result = Failure.
std::optional<int> classify_ca(const ClassifierModel& model,
                               const TopologicalProcess& query);

// Model directory layout: one landscape file per (class, position,
// dimension) named class###_snap###_dim#.landscape, plus manifest.txt with
// plain-text key-value lines (N, M, p, dims, training metadata, labels).
void save_model(const ClassifierModel& model, const std::string& dir);
ClassifierModel load_model(const std::string& dir);

// Single-file text serialization of a process: a small key-value header
// followed by 2*M landscape blocks (dimension 0 then 1, per snapshot).
void write_process_file(const TopologicalProcess& p, const std::string& path);
TopologicalProcess read_process_file(const std::string& path);

}  // namespace topo
