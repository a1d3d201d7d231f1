#include "topo/field.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace topo {

namespace {
constexpr char kMagic[8] = {'T', 'P', 'F', 'L', 'D', '0', '0', '1'};

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint64_t get_u64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

void put_f64(std::string& out, double d) {
  std::uint64_t bits;
  static_assert(sizeof(bits) == sizeof(d));
  std::memcpy(&bits, &d, 8);
  put_u64(out, bits);
}

double get_f64(const unsigned char* p) {
  std::uint64_t bits = get_u64(p);
  double d;
  std::memcpy(&d, &bits, 8);
  return d;
}
}  // namespace

ScalarField2D::ScalarField2D(Eigen::ArrayXXd v) : values(std::move(v)) {
  if (values.rows() < 1 || values.cols() < 1)
    throw std::invalid_argument("field: empty grid");
  if (!values.isFinite().all())
    throw std::invalid_argument("field: non-finite value");
}

LevelQuantizer::LevelQuantizer(double lo_, double hi_, int levels_)
    : lo(lo_), hi(hi_), levels(levels_) {
  if (!(lo < hi)) throw std::invalid_argument("quantizer: lo must be < hi");
  if (levels < 1) throw std::invalid_argument("quantizer: levels must be >= 1");
  if (!std::isfinite(lo) || !std::isfinite(hi))
    throw std::invalid_argument("quantizer: non-finite bound");
}

std::vector<double> LevelQuantizer::thresholds() const {
  std::vector<double> a(levels);
  for (int i = 1; i <= levels; ++i) a[i - 1] = lo + i * (hi - lo) / levels;
  a[levels - 1] = hi;  // guard against rounding drift at the top bin
  return a;
}

double LevelQuantizer::apply(double v) const {
  double c = std::min(v, hi);
  // Smallest threshold a_i with c <= a_i; anything below lo maps to a_1.
  if (c <= lo) return lo + (hi - lo) / levels;
  // i-1 < (c-lo)*levels/(hi-lo) <= i
  int i = static_cast<int>(std::ceil((c - lo) / (hi - lo) * levels));
  if (i < 1) i = 1;
  if (i > levels) i = levels;
  double a = lo + i * (hi - lo) / levels;
  // ceil() can land one bin low under rounding; fix up against the contract.
  while (i < levels && c > a) {
    ++i;
    a = lo + i * (hi - lo) / levels;
  }
  while (i > 1 && c <= lo + (i - 1) * (hi - lo) / levels) {
    --i;
    a = lo + i * (hi - lo) / levels;
  }
  return i == levels ? hi : a;
}

ScalarField2D quantize(const ScalarField2D& f, const LevelQuantizer& q) {
  Eigen::ArrayXXd out(f.values.rows(), f.values.cols());
  for (Eigen::Index r = 0; r < f.values.rows(); ++r)
    for (Eigen::Index c = 0; c < f.values.cols(); ++c)
      out(r, c) = q.apply(f.values(r, c));
  return ScalarField2D(std::move(out));
}

double mass(const ScalarField2D& f) { return f.values.mean(); }

void write_file_atomic(const std::string& path, const std::string& bytes) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open for writing: " + tmp);
    os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!os) throw std::runtime_error("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("rename failed: " + path);
}

ScalarField2D read_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open field file: " + path);
  std::string bytes((std::istreambuf_iterator<char>(is)),
                    std::istreambuf_iterator<char>());
  if (bytes.size() < 24 || std::memcmp(bytes.data(), kMagic, 8) != 0)
    throw std::runtime_error("malformed field header: " + path);
  const unsigned char* p = reinterpret_cast<const unsigned char*>(bytes.data());
  std::uint64_t nx = get_u64(p + 8);
  std::uint64_t ny = get_u64(p + 16);
  if (nx < 1 || ny < 1 || nx > (1u << 20) || ny > (1u << 20))
    throw std::runtime_error("malformed field header: " + path);
  std::uint64_t need = 24 + 8 * nx * ny;
  if (bytes.size() != need)
    throw std::runtime_error("field size mismatch: " + path);
  Eigen::ArrayXXd v(static_cast<Eigen::Index>(ny), static_cast<Eigen::Index>(nx));
  std::size_t off = 24;
  for (std::uint64_t iy = 0; iy < ny; ++iy)
    for (std::uint64_t ix = 0; ix < nx; ++ix, off += 8)
      v(static_cast<Eigen::Index>(iy), static_cast<Eigen::Index>(ix)) = get_f64(p + off);
  return ScalarField2D(std::move(v));
}

void write_field(const ScalarField2D& f, const std::string& path) {
  std::string bytes;
  bytes.reserve(24 + 8 * static_cast<std::size_t>(f.nx()) * f.ny());
  bytes.append(kMagic, 8);
  put_u64(bytes, static_cast<std::uint64_t>(f.nx()));
  put_u64(bytes, static_cast<std::uint64_t>(f.ny()));
  for (int iy = 0; iy < f.ny(); ++iy)
    for (int ix = 0; ix < f.nx(); ++ix) put_f64(bytes, f.values(iy, ix));
  write_file_atomic(path, bytes);
}

void write_pgm(const ScalarField2D& f, const std::string& path, double lo,
               double hi) {
  if (!(lo < hi)) throw std::invalid_argument("pgm: lo must be < hi");
  std::string bytes = "P5\n" + std::to_string(f.nx()) + " " +
                      std::to_string(f.ny()) + "\n255\n";
  for (int iy = 0; iy < f.ny(); ++iy)
    for (int ix = 0; ix < f.nx(); ++ix) {
      double g = std::floor((f.values(iy, ix) - lo) / (hi - lo) * 255.0);
      if (g < 0.0) g = 0.0;
      if (g > 255.0) g = 255.0;
      bytes.push_back(static_cast<char>(static_cast<unsigned char>(g)));
    }
  write_file_atomic(path, bytes);
}

void write_csv(const ScalarField2D& f, const std::string& path) {
  std::ostringstream os;
  os.precision(17);
  for (int iy = 0; iy < f.ny(); ++iy) {
    for (int ix = 0; ix < f.nx(); ++ix) {
      if (ix) os << ',';
      os << f.values(iy, ix);
    }
    os << '\n';
  }
  write_file_atomic(path, os.str());
}

}  // namespace topo
