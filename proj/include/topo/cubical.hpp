#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "topo/diagram.hpp"
#include "topo/field.hpp"

namespace topo {

/// Cubical complex of an nx-by-ny pixel grid in doubled coordinates: the
/// cell (cx, cy) with 0 <= cx <= 2nx, 0 <= cy <= 2ny has dimension
/// (cx mod 2) + (cy mod 2).  cells(cy, cx) holds the filtration value: a
/// 2-cell (both odd) carries its pixel's value, every lower-dimensional cell
/// the minimum over the 2-cells it bounds (so sublevel pixel sets connect
/// through shared edges and corners).
struct CubicalFiltration {
  int nx = 0;
  int ny = 0;
  Eigen::ArrayXXd cells;        // (2ny+1) rows, (2nx+1) cols
  std::vector<double> levels;   // sorted distinct cell values

  int width() const { return 2 * nx + 1; }
  int height() const { return 2 * ny + 1; }
};

CubicalFiltration build_filtration(const ScalarField2D& quantized);

struct PersistenceResult {
  PersistenceDiagram dim0;  // exactly one essential class on a rectangle
  PersistenceDiagram dim1;  // no essential class on a rectangle
};

/// Sublevel persistent homology over Z/2 by left-to-right reduction of the
/// boundary matrix in (value, dimension, linear index) order, with the
/// clearing shortcut (dimension 2 first).  Zero-persistence pairs are
/// dropped; equal-value component merges keep the cell with the smaller
/// linear index alive.
PersistenceResult compute_persistence(const CubicalFiltration& f);

/// Betti numbers (beta0, beta1) of the sublevel complex at threshold a,
/// read off the diagrams: pairs with birth <= a < death.
std::pair<int, int> betti_at_level(const PersistenceResult& pers, double a);

}  // namespace topo
