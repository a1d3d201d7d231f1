#include "topo/landscape.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <stdexcept>

#include "topo/field.hpp"  // write_file_atomic

namespace topo {

namespace {

// Sort order of the working pool: birth ascending, death descending, so the
// front element always dominates the remaining hats at its birth.
struct PoolCmp {
  bool operator()(const std::pair<double, double>& a,
                  const std::pair<double, double>& b) const {
    if (a.first != b.first) return a.first < b.first;
    return a.second > b.second;
  }
};

void push_point(std::vector<LandscapePoint>& layer, double x, double y) {
  if (!layer.empty() && layer.back().x == x) {
    // Zero-length segment (only possible when diagram values sit within a
    // rounding ulp of each other): merge, keeping the envelope value.
    layer.back().y = std::max(layer.back().y, y);
    return;
  }
  layer.push_back({x, y});
}

// Trim redundant zero runs at the ends; a layer that is zero everywhere
// becomes empty.
void normalize_layer(std::vector<LandscapePoint>& layer) {
  std::size_t b = 0, e = layer.size();
  while (e - b >= 2 && layer[b].y == 0.0 && layer[b + 1].y == 0.0) ++b;
  while (e - b >= 2 && layer[e - 1].y == 0.0 && layer[e - 2].y == 0.0) --e;
  if (e - b <= 1) {
    bool all_zero = true;
    for (std::size_t i = b; i < e; ++i) all_zero &= layer[i].y == 0.0;
    if (all_zero) {
      layer.clear();
      return;
    }
  }
  if (b != 0 || e != layer.size())
    layer = std::vector<LandscapePoint>(layer.begin() + b, layer.begin() + e);
}

// Integral of |f|^p over a linear piece f: [0, h] -> R with endpoint values
// a and b.  The naive antiderivative difference divided by the slope
// cancels catastrophically when a and b are nearly equal (parallel segments
// of the two landscapes), so each case gets a cancellation-free form.
double piece_integral(double h, double a, double b, double p) {
  if (h <= 0.0) return 0.0;
  const double va = std::abs(a), vb = std::abs(b);
  if ((a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0)) {
    // Split at the zero crossing: two ramps running from 0 to |a| and |b|.
    return h * (std::pow(va, p + 1.0) + std::pow(vb, p + 1.0)) /
           ((p + 1.0) * (va + vb));
  }
  if (p == 1.0) return h * (va + vb) / 2.0;
  if (p == 2.0) return h * (va * va + va * vb + vb * vb) / 3.0;
  const double hi = std::max(va, vb), lo = std::min(va, vb);
  if (hi == 0.0) return 0.0;
  if (hi - lo <= 1e-7 * hi) {
    // Series in the half-spread ratio r: the direct formula would divide a
    // cancelled difference by (hi - lo).
    const double m = (lo + hi) / 2.0;
    const double r = (hi - lo) / (2.0 * m);
    return h * std::pow(m, p) * (1.0 + p * (p - 1.0) * r * r / 6.0);
  }
  return h * (std::pow(hi, p + 1.0) - std::pow(lo, p + 1.0)) /
         ((p + 1.0) * (hi - lo));
}

std::vector<double> merged_breakpoints(
    const std::vector<const std::vector<LandscapePoint>*>& layers) {
  std::vector<double> xs;
  for (const auto* ly : layers)
    for (const auto& pt : *ly) xs.push_back(pt.x);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

}  // namespace

PersistenceLandscape landscape_from_diagram(const PersistenceDiagram& d,
                                            double truncation) {
  if (!std::isfinite(truncation))
    throw std::invalid_argument(
        "landscape_from_diagram: truncation must be finite");
  std::multiset<std::pair<double, double>, PoolCmp> pool;
  for (const auto& pt : d.points) {
    if (pt.first > truncation)
      throw std::invalid_argument(
          "landscape_from_diagram: truncation lies below a birth value");
    double death = std::isinf(pt.second) ? truncation : pt.second;
    if (pt.first < death) pool.insert({pt.first, death});
  }

  PersistenceLandscape out;
  out.dim = d.dim;
  // Peel layers off the pool of hats.  Each layer traces the upper envelope
  // of the hats still in the pool; where the envelope switches from a hat
  // with death cd to a later-born hat, the cut-off corner survives as the
  // virtual pair (birth', cd) and is returned to the pool for deeper layers.
  while (!pool.empty()) {
    auto first = pool.begin();
    double cb = first->first, cd = first->second;
    pool.erase(first);
    std::vector<LandscapePoint> layer;
    push_point(layer, cb, 0.0);
    push_point(layer, (cb + cd) / 2.0, (cd - cb) / 2.0);
    auto scan = pool.begin();
    while (true) {
      while (scan != pool.end() && scan->second <= cd) ++scan;
      if (scan == pool.end()) {
        push_point(layer, cd, 0.0);
        break;
      }
      const double nb = scan->first, nd = scan->second;
      scan = pool.erase(scan);
      if (nb >= cd) {
        push_point(layer, cd, 0.0);
        if (nb > cd) push_point(layer, nb, 0.0);
      } else {
        push_point(layer, (nb + cd) / 2.0, (cd - nb) / 2.0);
        pool.insert({nb, cd});
      }
      push_point(layer, (nb + nd) / 2.0, (nd - nb) / 2.0);
      cb = nb;
      cd = nd;
    }
    out.layers.push_back(std::move(layer));
  }
  return out;
}

double evaluate(const PersistenceLandscape& l, int k, double x) {
  if (k < 1) throw std::invalid_argument("evaluate: layer index must be >= 1");
  if (k > static_cast<int>(l.layers.size())) return 0.0;
  const auto& ly = l.layers[k - 1];
  if (ly.empty()) return 0.0;
  if (x < ly.front().x || x > ly.back().x) return 0.0;
  auto it = std::lower_bound(
      ly.begin(), ly.end(), x,
      [](const LandscapePoint& p, double v) { return p.x < v; });
  if (it != ly.end() && it->x == x) return it->y;
  const LandscapePoint& p1 = *it;
  const LandscapePoint& p0 = *(it - 1);
  double t = (x - p0.x) / (p1.x - p0.x);
  return p0.y + t * (p1.y - p0.y);
}

namespace {

PersistenceLandscape combine(const std::vector<PersistenceLandscape>& ls,
                             const std::vector<double>* coeffs) {
  if (ls.empty())
    throw std::invalid_argument("landscape combination: empty input list");
  if (coeffs && coeffs->size() != ls.size())
    throw std::invalid_argument(
        "linear_combination: coefficient/landscape count mismatch");
  const int dim = ls.front().dim;
  std::size_t max_layers = 0;
  for (const auto& l : ls) {
    if (l.dim != dim)
      throw std::invalid_argument(
          "landscape combination: mixed homology dimensions");
    max_layers = std::max(max_layers, l.layers.size());
  }
  PersistenceLandscape out;
  out.dim = dim;
  const double n = static_cast<double>(ls.size());
  for (std::size_t k = 1; k <= max_layers; ++k) {
    std::vector<const std::vector<LandscapePoint>*> present;
    for (const auto& l : ls)
      if (k <= l.layers.size() && !l.layers[k - 1].empty())
        present.push_back(&l.layers[k - 1]);
    std::vector<LandscapePoint> layer;
    if (!present.empty()) {
      for (double x : merged_breakpoints(present)) {
        double y;
        if (coeffs) {
          y = 0.0;
          for (std::size_t i = 0; i < ls.size(); ++i)
            y += (*coeffs)[i] * evaluate(ls[i], static_cast<int>(k), x);
        } else {
          // Anchored mean: exact identity when all inputs agree.
          double y0 = evaluate(ls[0], static_cast<int>(k), x);
          double corr = 0.0;
          for (std::size_t i = 1; i < ls.size(); ++i)
            corr += evaluate(ls[i], static_cast<int>(k), x) - y0;
          y = y0 + corr / n;
        }
        layer.push_back({x, y});
      }
      normalize_layer(layer);
    }
    out.layers.push_back(std::move(layer));
  }
  while (!out.layers.empty() && out.layers.back().empty())
    out.layers.pop_back();
  return out;
}

}  // namespace

PersistenceLandscape linear_combination(
    const std::vector<double>& coeffs,
    const std::vector<PersistenceLandscape>& landscapes) {
  return combine(landscapes, &coeffs);
}

PersistenceLandscape average(const std::vector<PersistenceLandscape>& ls) {
  return combine(ls, nullptr);
}

double lp_distance(const PersistenceLandscape& a,
                   const PersistenceLandscape& b, double p) {
  if (!(p >= 1.0))
    throw std::invalid_argument("lp_distance: p must be >= 1");
  if (a.dim != b.dim)
    throw std::invalid_argument("lp_distance: mixed homology dimensions");
  const std::size_t max_layers = std::max(a.layers.size(), b.layers.size());
  static const std::vector<LandscapePoint> kEmpty;
  if (std::isinf(p)) {
    double sup = 0.0;
    for (std::size_t k = 1; k <= max_layers; ++k) {
      const auto& la = k <= a.layers.size() ? a.layers[k - 1] : kEmpty;
      const auto& lb = k <= b.layers.size() ? b.layers[k - 1] : kEmpty;
      for (double x : merged_breakpoints({&la, &lb})) {
        double d = std::abs(evaluate(a, static_cast<int>(k), x) -
                            evaluate(b, static_cast<int>(k), x));
        sup = std::max(sup, d);
      }
    }
    return sup;
  }
  double total = 0.0;
  for (std::size_t k = 1; k <= max_layers; ++k) {
    const auto& la = k <= a.layers.size() ? a.layers[k - 1] : kEmpty;
    const auto& lb = k <= b.layers.size() ? b.layers[k - 1] : kEmpty;
    auto xs = merged_breakpoints({&la, &lb});
    if (xs.size() < 2) continue;
    double prev_x = xs[0];
    double prev_f = evaluate(a, static_cast<int>(k), prev_x) -
                    evaluate(b, static_cast<int>(k), prev_x);
    for (std::size_t t = 1; t < xs.size(); ++t) {
      double x = xs[t];
      double f = evaluate(a, static_cast<int>(k), x) -
                 evaluate(b, static_cast<int>(k), x);
      total += piece_integral(x - prev_x, prev_f, f, p);
      prev_x = x;
      prev_f = f;
    }
  }
  return std::pow(total, 1.0 / p);
}

void write_landscape(std::ostream& os, const PersistenceLandscape& l) {
  os << "landscape dim " << l.dim << " layers " << l.layers.size() << '\n';
  os << std::setprecision(17);
  for (const auto& layer : l.layers) {
    bool first = true;
    for (const auto& pt : layer) {
      if (!first) os << ' ';
      os << pt.x << ' ' << pt.y;
      first = false;
    }
    os << '\n';
  }
}

PersistenceLandscape read_landscape(std::istream& is) {
  std::string header;
  if (!std::getline(is, header))
    throw std::runtime_error("landscape: missing header");
  std::istringstream hs(header);
  std::string word_landscape, word_dim, word_layers;
  int dim = 0;
  std::size_t nlayers = 0;
  if (!(hs >> word_landscape >> word_dim >> dim >> word_layers >> nlayers) ||
      word_landscape != "landscape" || word_dim != "dim" ||
      word_layers != "layers")
    throw std::runtime_error("landscape: malformed header: " + header);
  PersistenceLandscape l;
  l.dim = dim;
  l.layers.resize(nlayers);
  for (std::size_t k = 0; k < nlayers; ++k) {
    std::string line;
    if (!std::getline(is, line))
      throw std::runtime_error("landscape: missing layer line");
    std::istringstream ls(line);
    std::vector<double> vals;
    double v;
    while (ls >> v) vals.push_back(v);
    if (vals.size() % 2 != 0)
      throw std::runtime_error("landscape: odd coordinate count in layer");
    auto& layer = l.layers[k];
    layer.reserve(vals.size() / 2);
    for (std::size_t i = 0; i < vals.size(); i += 2) {
      if (!layer.empty() && !(layer.back().x < vals[i]))
        throw std::runtime_error("landscape: breakpoints not increasing");
      layer.push_back({vals[i], vals[i + 1]});
    }
  }
  return l;
}

void write_landscape_file(const PersistenceLandscape& l,
                          const std::string& path) {
  std::ostringstream os;
  write_landscape(os, l);
  write_file_atomic(path, os.str());
}

PersistenceLandscape read_landscape_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open landscape file: " + path);
  return read_landscape(is);
}

}  // namespace topo
