#include "topo/cubical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace topo {

namespace {

inline int cell_dim(int cx, int cy) { return (cx & 1) + (cy & 1); }

// Boundary cells (doubled coordinates) of the cell (cx, cy); empty for
// vertices.  Odd coordinates are never on the grid border, so the boundary
// always lies inside the complex.
inline int boundary_cells(int cx, int cy, int out[4][2]) {
  int n = 0;
  const bool ox = cx & 1, oy = cy & 1;
  if (ox && oy) {  // square -> four edges
    out[n][0] = cx - 1; out[n][1] = cy; ++n;
    out[n][0] = cx + 1; out[n][1] = cy; ++n;
    out[n][0] = cx; out[n][1] = cy - 1; ++n;
    out[n][0] = cx; out[n][1] = cy + 1; ++n;
  } else if (ox) {  // horizontal edge -> two vertices
    out[n][0] = cx - 1; out[n][1] = cy; ++n;
    out[n][0] = cx + 1; out[n][1] = cy; ++n;
  } else if (oy) {  // vertical edge -> two vertices
    out[n][0] = cx; out[n][1] = cy - 1; ++n;
    out[n][0] = cx; out[n][1] = cy + 1; ++n;
  }
  return n;
}

// Z/2 symmetric difference of two sorted position lists.
void xor_into(std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j])
      out.push_back(a[i++]);
    else if (b[j] < a[i])
      out.push_back(b[j++]);
    else {
      ++i;
      ++j;
    }
  }
  out.insert(out.end(), a.begin() + i, a.end());
  out.insert(out.end(), b.begin() + j, b.end());
  a.swap(out);
}

}  // namespace

CubicalFiltration build_filtration(const ScalarField2D& quantized) {
  CubicalFiltration f;
  f.nx = quantized.nx();
  f.ny = quantized.ny();
  const int w = f.width(), h = f.height();
  f.cells.resize(h, w);
  const double inf = std::numeric_limits<double>::infinity();
  for (int cy = 0; cy < h; ++cy)
    for (int cx = 0; cx < w; ++cx) {
      // Minimum over incident pixels: pixel (px, py) covers doubled
      // coordinates [2px, 2px+2] x [2py, 2py+2].
      double best = inf;
      int pxs[2], pys[2], npx = 0, npy = 0;
      if (cx & 1) {
        pxs[npx++] = (cx - 1) / 2;
      } else {
        if (cx > 0) pxs[npx++] = cx / 2 - 1;
        if (cx < w - 1) pxs[npx++] = cx / 2;
      }
      if (cy & 1) {
        pys[npy++] = (cy - 1) / 2;
      } else {
        if (cy > 0) pys[npy++] = cy / 2 - 1;
        if (cy < h - 1) pys[npy++] = cy / 2;
      }
      for (int a = 0; a < npx; ++a)
        for (int b = 0; b < npy; ++b)
          best = std::min(best, quantized.values(pys[b], pxs[a]));
      f.cells(cy, cx) = best;
    }
  std::vector<double> lv(quantized.values.data(),
                         quantized.values.data() + quantized.values.size());
  std::sort(lv.begin(), lv.end());
  lv.erase(std::unique(lv.begin(), lv.end()), lv.end());
  f.levels = std::move(lv);
  return f;
}

PersistenceResult compute_persistence(const CubicalFiltration& f) {
  const int w = f.width(), h = f.height();
  const int ncells = w * h;

  // Filtration order: (value, dimension, linear index) ascending.
  std::vector<int> order(ncells);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> value(ncells);
  std::vector<signed char> dim(ncells);
  for (int cy = 0; cy < h; ++cy)
    for (int cx = 0; cx < w; ++cx) {
      int id = cy * w + cx;
      value[id] = f.cells(cy, cx);
      dim[id] = static_cast<signed char>(cell_dim(cx, cy));
    }
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (value[a] != value[b]) return value[a] < value[b];
    if (dim[a] != dim[b]) return dim[a] < dim[b];
    return a < b;
  });
  std::vector<int> pos(ncells);
  for (int p = 0; p < ncells; ++p) pos[order[p]] = p;

  std::vector<signed char> paired(ncells, 0);   // by position
  std::vector<signed char> cleared(ncells, 0);  // by position
  std::vector<int> pivot_col(ncells, -1);       // row position -> column owner
  std::vector<std::vector<int>> columns(ncells);

  PersistenceResult result;
  result.dim0.dim = 0;
  result.dim1.dim = 1;

  int bnd[4][2];
  // Clearing: reduce squares first, then edges; pivot rows of the square
  // phase are positive edges whose own columns need no reduction.
  for (int d = 2; d >= 1; --d) {
    for (int p = 0; p < ncells; ++p) {
      const int id = order[p];
      if (dim[id] != d || cleared[p]) continue;
      const int cx = id % w, cy = id / w;
      const int nb = boundary_cells(cx, cy, bnd);
      std::vector<int> col;
      col.reserve(nb);
      for (int t = 0; t < nb; ++t)
        col.push_back(pos[bnd[t][1] * w + bnd[t][0]]);
      std::sort(col.begin(), col.end());
      while (!col.empty()) {
        const int low = col.back();
        const int owner = pivot_col[low];
        if (owner < 0) break;
        xor_into(col, columns[owner]);
      }
      if (col.empty()) continue;  // positive cell
      const int low = col.back();
      pivot_col[low] = p;
      columns[p] = std::move(col);
      paired[low] = paired[p] = 1;
      const double birth = value[order[low]];
      const double death = value[id];
      if (birth != death) {
        if (d == 2)
          result.dim1.points.emplace_back(birth, death);
        else
          result.dim0.points.emplace_back(birth, death);
      }
      cleared[low] = 1;
    }
  }

  // Unpaired creators are essential: vertices give dimension-0 classes,
  // positive edges would give dimension-1 classes (none on a rectangle).
  for (int p = 0; p < ncells; ++p) {
    if (paired[p]) continue;
    const int id = order[p];
    if (dim[id] == 0)
      result.dim0.points.emplace_back(value[id], kInfDeath);
    else if (dim[id] == 1)
      result.dim1.points.emplace_back(value[id], kInfDeath);
  }

  auto by_birth = [](const std::pair<double, double>& a,
                     const std::pair<double, double>& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second < b.second;
  };
  std::sort(result.dim0.points.begin(), result.dim0.points.end(), by_birth);
  std::sort(result.dim1.points.begin(), result.dim1.points.end(), by_birth);
  return result;
}

std::pair<int, int> betti_at_level(const PersistenceResult& pers, double a) {
  auto count = [a](const PersistenceDiagram& d) {
    int c = 0;
    for (const auto& pt : d.points)
      if (pt.first <= a && a < pt.second) ++c;
    return c;
  };
  return {count(pers.dim0), count(pers.dim1)};
}

}  // namespace topo
