#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace topo {

/// A real scalar field sampled at the centers of an nx-by-ny grid of
/// subsquares of the unit square.  values(iy, ix) is the sample at
/// x1 = (ix + 1/2)/nx, x2 = (iy + 1/2)/ny; rows scan x2, columns scan x1.
struct ScalarField2D {
  Eigen::ArrayXXd values;  // ny rows, nx cols

  ScalarField2D() = default;
  explicit ScalarField2D(Eigen::ArrayXXd v);

  int nx() const { return static_cast<int>(values.cols()); }
  int ny() const { return static_cast<int>(values.rows()); }
};

/// Uniform level quantizer on [lo, hi] with `levels` right-closed bins.
/// Thresholds a_i = lo + i*(hi-lo)/levels for i = 1..levels; a value v maps
/// to the smallest a_i with min(v, hi) <= a_i (values below lo land in the
/// first bin).
struct LevelQuantizer {
  double lo = -1.0;
  double hi = 1.0;
  int levels = 256;

  LevelQuantizer() = default;
  LevelQuantizer(double lo_, double hi_, int levels_);

  std::vector<double> thresholds() const;
  double apply(double v) const;
};

ScalarField2D quantize(const ScalarField2D& f, const LevelQuantizer& q);

/// Mean of the field over the grid (the conserved quantity of the dynamics).
double mass(const ScalarField2D& f);

// Binary format: 8-byte magic "TPFLD001", then nx and ny as 64-bit
// little-endian unsigned integers, then nx*ny IEEE doubles (little-endian),
// row-major (iy outer, ix inner).
ScalarField2D read_field(const std::string& path);
void write_field(const ScalarField2D& f, const std::string& path);

/// 8-bit binary PGM (P5, maxval 255); gray = floor of the affine map of
/// [lo, hi] onto [0, 255], clamped.
void write_pgm(const ScalarField2D& f, const std::string& path, double lo,
               double hi);

/// Plain CSV, one line per grid row (fixed iy), columns scan ix.
void write_csv(const ScalarField2D& f, const std::string& path);

// Shared plumbing: atomic text/binary writes (temp file + rename) so
// re-running a pipeline stage never leaves a half-written artifact.
void write_file_atomic(const std::string& path, const std::string& bytes);

}  // namespace topo
