#include "topo/chc.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace topo {

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;

// Sampled orthonormal cosine basis: B(j, k) = c_k cos(k pi (j+1/2)/G) with
// c_0 = 1, c_k = sqrt(2).  Columns are orthonormal under (1/G) sum_j, so
// analysis is (1/G^2) B^T U^T B and synthesis is B C^T B^T.
struct CosinePlan {
  int modes;
  int grid;
  Eigen::MatrixXd basis;  // grid x modes

  CosinePlan(int k, int g) : modes(k), grid(g), basis(g, k) {
    const double sqrt2 = std::sqrt(2.0);
    for (int j = 0; j < g; ++j)
      for (int m = 0; m < k; ++m) {
        double c = m == 0 ? 1.0 : sqrt2;
        basis(j, m) = c * std::cos(m * kPi * (j + 0.5) / g);
      }
  }

  Eigen::MatrixXd synth(const Eigen::ArrayXXd& coeffs) const {
    return basis * coeffs.matrix().transpose() * basis.transpose();
  }

  Eigen::ArrayXXd analyze(const Eigen::MatrixXd& grid_values) const {
    Eigen::MatrixXd c =
        basis.transpose() * grid_values.transpose() * basis;
    return (c.array() / (static_cast<double>(grid) * grid)).eval();
  }
};

void validate(const ChcParams& p) {
  if (!(p.epsilon > 0.0))
    throw std::invalid_argument("chc: epsilon must be positive");
  if (!(p.sigma >= 0.0))
    throw std::invalid_argument("chc: sigma must be nonnegative");
  if (p.modes < 1) throw std::invalid_argument("chc: modes must be >= 1");
  if (p.steps < 1) throw std::invalid_argument("chc: steps must be >= 1");
}

Eigen::ArrayXXd squared_wavenumbers(int k) {
  Eigen::ArrayXXd q2(k, k);
  for (int k1 = 0; k1 < k; ++k1)
    for (int k2 = 0; k2 < k; ++k2)
      q2(k1, k2) = kPi * kPi * (static_cast<double>(k1) * k1 +
                                static_cast<double>(k2) * k2);
  return q2;
}

SpectralState step_with_plan(const SpectralState& state,
                             const ChcParams& params, double dt,
                             NormalRng& rng, const CosinePlan& plan,
                             const Eigen::ArrayXXd& q2) {
  const int k = state.modes();
  Eigen::MatrixXd u = plan.synth(state.coeffs);
  Eigen::ArrayXXd fprime = u.array().cube() - u.array();
  Eigen::ArrayXXd nhat = plan.analyze(fprime.matrix());

  SpectralState out;
  out.t = state.t + dt;
  Eigen::ArrayXXd numer = state.coeffs - dt * q2 * nhat;
  if (params.sigma != 0.0) {
    const double amp = params.sigma * std::sqrt(dt);
    for (int k1 = 0; k1 < k; ++k1)
      for (int k2 = 0; k2 < k; ++k2) {
        if (k1 == 0 && k2 == 0) continue;
        numer(k1, k2) += amp * rng.normal();
      }
  }
  out.coeffs =
      numer / (1.0 + dt * params.epsilon * params.epsilon * q2 * q2);
  out.coeffs(0, 0) = state.coeffs(0, 0);  // mean is conserved exactly
  return out;
}

}  // namespace

double potential_f(double u) {
  double w = u * u - 1.0;
  return w * w / 4.0;
}

double potential_df(double u) { return u * u * u - u; }

double potential_ddf(double u) { return 3.0 * u * u - 1.0; }

bool spinodal(double mu) { return potential_ddf(mu) < 0.0; }

double endtime(double mu, double epsilon) {
  double ddf = potential_ddf(mu);
  if (ddf == 0.0)
    throw std::invalid_argument("endtime: F''(mu) vanishes at this mean");
  return 80.0 * epsilon * epsilon / (ddf * ddf);
}

double dispersion_rate(double q2, double mu, double epsilon) {
  return -q2 * (epsilon * epsilon * q2 + potential_ddf(mu));
}

SpectralState init_state(const ChcParams& params, NormalRng& rng) {
  validate(params);
  const int k = params.modes;
  SpectralState s;
  s.t = 0.0;
  s.coeffs.resize(k, k);
  for (int k1 = 0; k1 < k; ++k1)
    for (int k2 = 0; k2 < k; ++k2) {
      if (k1 == 0 && k2 == 0) continue;
      s.coeffs(k1, k2) = rng.normal();
    }
  s.coeffs(0, 0) = params.mu;
  if (k > 1) {
    CosinePlan plan(k, 2 * k);
    Eigen::MatrixXd u = plan.synth(s.coeffs);
    double sup = (u.array() - params.mu).abs().maxCoeff();
    if (sup > 0.0) {
      double scale = kInitAmplitude / sup;
      s.coeffs *= scale;
      s.coeffs(0, 0) = params.mu;
    }
  }
  return s;
}

SpectralState step(const SpectralState& state, const ChcParams& params,
                   double dt, NormalRng& rng) {
  validate(params);
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
  CosinePlan plan(state.modes(), 2 * state.modes());
  Eigen::ArrayXXd q2 = squared_wavenumbers(state.modes());
  return step_with_plan(state, params, dt, rng, plan, q2);
}

ScalarField2D synthesize(const SpectralState& state, int grid_n) {
  if (grid_n < 1)
    throw std::invalid_argument("synthesize: grid must be >= 1");
  CosinePlan plan(state.modes(), grid_n);
  return ScalarField2D(plan.synth(state.coeffs).array());
}

Eigen::ArrayXXd nonlinearity_coeffs(const SpectralState& state, int grid_n) {
  if (grid_n < state.modes())
    throw std::invalid_argument(
        "nonlinearity_coeffs: grid must be >= mode count");
  CosinePlan plan(state.modes(), grid_n);
  Eigen::MatrixXd u = plan.synth(state.coeffs);
  Eigen::ArrayXXd fprime = u.array().cube() - u.array();
  return plan.analyze(fprime.matrix());
}

std::vector<ScalarField2D> simulate(const ChcParams& params,
                                    const std::vector<double>& snapshot_times,
                                    int out_grid) {
  validate(params);
  if (out_grid < 1)
    throw std::invalid_argument("simulate: output grid must be >= 1");
  const double t_end = endtime(params.mu, params.epsilon);
  const double dt = t_end / static_cast<double>(params.steps);
  // A few ulps of grace on the upper bound: times computed as t_end * l / m
  // can land one rounding step above t_end.
  const double t_max = t_end * (1.0 + 4.0 * std::numeric_limits<double>::epsilon());
  for (std::size_t i = 0; i < snapshot_times.size(); ++i) {
    double t = snapshot_times[i];
    if (!(t > 0.0) || t > t_max)
      throw std::invalid_argument(
          "simulate: snapshot times must lie in (0, endtime]");
    if (i > 0 && snapshot_times[i - 1] > t)
      throw std::invalid_argument("simulate: snapshot times must be sorted");
  }
  std::vector<long> snap_steps(snapshot_times.size());
  for (std::size_t i = 0; i < snapshot_times.size(); ++i) {
    long idx = std::lround(snapshot_times[i] / dt);
    snap_steps[i] = std::min<long>(idx, params.steps);
  }

  NormalRng rng(params.seed);
  SpectralState state = init_state(params, rng);
  CosinePlan inner(params.modes, 2 * params.modes);
  CosinePlan outer(params.modes, out_grid);
  Eigen::ArrayXXd q2 = squared_wavenumbers(params.modes);

  std::vector<ScalarField2D> out;
  out.reserve(snapshot_times.size());
  std::size_t next = 0;
  auto emit_due = [&](long step_index) {
    while (next < snap_steps.size() && snap_steps[next] == step_index) {
      out.push_back(ScalarField2D(outer.synth(state.coeffs).array()));
      ++next;
    }
  };
  emit_due(0);
  for (long i = 1; i <= params.steps && next < snap_steps.size(); ++i) {
    state = step_with_plan(state, params, dt, rng, inner, q2);
    emit_due(i);
  }
  return out;
}

double energy(const ScalarField2D& f, double epsilon) {
  const int nx = f.nx(), ny = f.ny();
  const double h1 = 1.0 / nx, h2 = 1.0 / ny;
  double total = 0.0;
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix) {
      double left = f.values(iy, ix == 0 ? 0 : ix - 1);
      double right = f.values(iy, ix == nx - 1 ? nx - 1 : ix + 1);
      double down = f.values(iy == 0 ? 0 : iy - 1, ix);
      double up = f.values(iy == ny - 1 ? ny - 1 : iy + 1, ix);
      double ux = (right - left) / (2.0 * h1);
      double uy = (up - down) / (2.0 * h2);
      double u = f.values(iy, ix);
      total += 0.5 * epsilon * epsilon * (ux * ux + uy * uy) + potential_f(u);
    }
  return total / (static_cast<double>(nx) * ny);
}

}  // namespace topo
