#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "topo/diagram.hpp"

namespace topo {

struct LandscapePoint {
  double x = 0.0;
  double y = 0.0;
};

/// Persistence landscape: layers[k-1] is the k-th layer as a breakpoint list
/// with strictly increasing x; the function is linear between breakpoints
/// and zero outside the listed span.  Layers beyond layers.size() are
/// identically zero.  Landscapes built from diagrams (and averages of such)
/// are nonnegative with slopes in [-1, 1] and satisfy layer monotonicity;
/// general linear combinations need not.
struct PersistenceLandscape {
  int dim = 0;
  std::vector<std::vector<LandscapePoint>> layers;
};

/// Build the landscape of a diagram: the k-th layer is the k-th largest
/// value among the hat functions of the points.  Infinite deaths are
/// replaced by `truncation`, which must not lie below any birth.
PersistenceLandscape landscape_from_diagram(const PersistenceDiagram& d,
                                            double truncation);

/// Value of the k-th layer (k >= 1) at x; zero outside stored layers/span.
double evaluate(const PersistenceLandscape& l, int k, double x);

/// Exact piecewise-linear combination sum_i coeffs[i] * landscapes[i],
/// evaluated layer-by-layer on merged breakpoints.
PersistenceLandscape linear_combination(
    const std::vector<double>& coeffs,
    const std::vector<PersistenceLandscape>& landscapes);

/// Pointwise mean; averaging a list of identical landscapes reproduces the
/// input exactly.
PersistenceLandscape average(const std::vector<PersistenceLandscape>& ls);

/// L^p distance over the product of counting measure on layers and Lebesgue
/// measure on the line: (sum_k integral |l1_k - l2_k|^p dx)^(1/p); exact
/// closed-form integration per linear piece for finite p, supremum over
/// breakpoints for p = infinity.  Requires p >= 1 and equal dim.
double lp_distance(const PersistenceLandscape& a,
                   const PersistenceLandscape& b, double p);

// Text format: header "landscape dim <d> layers <n>", then one line per
// layer holding its breakpoints as whitespace-separated x y pairs, printed
// with 17 significant digits (doubles round-trip exactly).
void write_landscape(std::ostream& os, const PersistenceLandscape& l);
PersistenceLandscape read_landscape(std::istream& is);
void write_landscape_file(const PersistenceLandscape& l,
                          const std::string& path);
PersistenceLandscape read_landscape_file(const std::string& path);

}  // namespace topo
