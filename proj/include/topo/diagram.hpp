#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace topo {

inline constexpr double kInfDeath = std::numeric_limits<double>::infinity();

/// Multiset of (birth, death) pairs for one homology dimension; death may be
/// +infinity for essential classes.  Multiplicity is its count in `points`.
struct PersistenceDiagram {
  int dim = 0;
  std::vector<std::pair<double, double>> points;  // birth < death
};

/// Replace infinite deaths by `truncation` and drop any point whose
/// persistence becomes nonpositive.  Errors if truncation lies below a birth.
PersistenceDiagram truncated(const PersistenceDiagram& d, double truncation);

/// Exact bottleneck distance under the sup-norm point metric; the diagonal
/// is available to both sides at cost (death-birth)/2.  Computed by binary
/// search over the finite candidate set with a bipartite-matching
/// feasibility test.  Both diagrams must be finite (truncate essentials
/// first).
double bottleneck_distance(const PersistenceDiagram& a,
                           const PersistenceDiagram& b);

/// Exact p-Wasserstein distance (p >= 1, finite) via the Hungarian method on
/// the diagonal-augmented cost matrix; p = infinity dispatches to the
/// bottleneck distance.
double wasserstein_distance(const PersistenceDiagram& a,
                            const PersistenceDiagram& b, double p);

// CSV with header "dim,birth,death"; essential deaths serialize as "inf".
void write_diagram_csv(const std::vector<PersistenceDiagram>& dgms,
                       const std::string& path);
std::vector<PersistenceDiagram> read_diagram_csv(const std::string& path);

}  // namespace topo
