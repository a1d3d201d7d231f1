#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "topo/field.hpp"
#include "topo/rng.hpp"

namespace topo {

/// Double-well potential F(u) = (u^2 - 1)^2 / 4 and its derivatives.
double potential_f(double u);
double potential_df(double u);   // F'(u) = u^3 - u
double potential_ddf(double u);  // F''(u) = 3u^2 - 1

/// A mean mu is spinodal (linearly unstable) iff F''(mu) < 0, i.e.
/// |mu| < 1/sqrt(3).
bool spinodal(double mu);

/// Phase-separation horizon T_e = 80 eps^2 / F''(mu)^2.
double endtime(double mu, double epsilon);

/// Linear growth rate of the cosine mode with squared wavenumber
/// q2 = pi^2 (k1^2 + k2^2) about the mean mu:
/// lambda(q) = -q2 (eps^2 q2 + F''(mu)).
double dispersion_rate(double q2, double mu, double epsilon);

struct ChcParams {
  double epsilon = 0.005;
  double sigma = 0.001;
  double mu = 0.0;
  int modes = 256;          // K: cosine modes per axis, k = 0..K-1
  long steps = 100000;      // time steps over [0, endtime]
  std::uint64_t seed = 0;
};

/// Truncated cosine expansion u = sum_{k1,k2 < K} coeffs(k1,k2)
/// phi_k1(x1) phi_k2(x2) with the orthonormal Neumann basis
/// phi_0 = 1, phi_k(x) = sqrt(2) cos(k pi x) for k >= 1.
struct SpectralState {
  Eigen::ArrayXXd coeffs;  // K x K, (k1, k2)
  double t = 0.0;

  int modes() const { return static_cast<int>(coeffs.rows()); }
};

/// Initial condition: coeffs(0,0) = mu; every other coefficient i.i.d.
/// standard normal, then all nonconstant coefficients rescaled by one common
/// factor so that sup |u0 - mu| over the 2K-per-side sampling grid equals
/// 1e-4.  Deterministic in params.seed and independent of sigma.
inline constexpr double kInitAmplitude = 1e-4;
SpectralState init_state(const ChcParams& params, NormalRng& rng);

/// One semi-implicit step of du/dt = -Laplace(eps^2 Laplace(u) - F'(u))
/// + sigma xi: stiff linear part implicit, nonlinearity pseudo-spectral on a
/// 2K grid (alias-free for the cubic term), mode-wise noise sigma sqrt(dt)
/// N(0,1) on every nonconstant mode.  The (0,0) coefficient is not touched,
/// so the mean is conserved exactly.
SpectralState step(const SpectralState& state, const ChcParams& params,
                   double dt, NormalRng& rng);

/// Evaluate the expansion at the centers of a grid_n-per-side grid.
ScalarField2D synthesize(const SpectralState& state, int grid_n);

/// Cosine coefficients of F'(u) sampled pseudo-spectrally on a
/// grid_n-per-side grid (grid_n >= 2K for an alias-free cubic term),
/// truncated to K x K.  Errors if grid_n < K.
Eigen::ArrayXXd nonlinearity_coeffs(const SpectralState& state, int grid_n);

/// Run the dynamics over [0, endtime(mu, epsilon)] with dt = endtime/steps
/// and return the fields synthesized on an out_grid-per-side grid at the
/// step indices nearest the requested times (which must be sorted,
/// positive, and at most endtime).
std::vector<ScalarField2D> simulate(const ChcParams& params,
                                    const std::vector<double>& snapshot_times,
                                    int out_grid);

/// Grid quadrature of the free energy integral of eps^2 |grad u|^2 / 2
/// + F(u), with centered differences and Neumann reflection at the boundary.
double energy(const ScalarField2D& f, double epsilon);

}  // namespace topo
