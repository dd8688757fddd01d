#pragma once

#include "whq/grid.hpp"
#include "whq/transforms.hpp"

namespace whq {

/// Interval E = (alpha, beta), alpha < beta.
struct IntervalSet {
  double alpha;
  double beta;

  IntervalSet(double a, double b);
  double width() const { return beta - alpha; }
  bool contains(double x) const { return x > alpha && x < beta; }
};

/// Smooth approximation u_{E,sigma} = omega_sigma * chi_E of the indicator
/// of E. sigma = 0 is the sampled characteristic function itself (a bin
/// belongs to E iff its center does). Values for sigma > 0 are evaluated
/// from the bump CDF, u(x) = Omega((x-alpha)/sigma) - Omega((x-beta)/sigma),
/// so they are continuum-exact rather than grid-convolution artifacts.
struct SmoothIndicator {
  IntervalSet set;
  double sigma;
  SampledFunction1D values;

  bool is_smooth() const { return sigma > 0.0; }
};

/// The standard bump c*exp(-1/(1-x^2)) on (-1,1), zero outside, with c
/// fixed so that the *grid quadrature* of the samples is exactly 1.
SampledFunction1D bump_mollifier(const LineGrid& grid);

/// omega_sigma(x) = (1/sigma) * omega(x/sigma), resampled on omega's grid by
/// linear interpolation and renormalized to unit grid mass.
SampledFunction1D scaled_mollifier(const SampledFunction1D& omega, double sigma);

SmoothIndicator smooth_indicator(const IntervalSet& set, double sigma,
                                 const LineGrid& grid);

/// a(x) = \int_alpha^beta exp(-(t-x)^2) dt, evaluated via erfc so the
/// far tails stay positive and accurate instead of cancelling to zero.
SampledFunction1D gaussian_window_closed_form(const IntervalSet& set,
                                              const LineGrid& grid);
double gaussian_window_value(const IntervalSet& set, double x);

/// Exact convolution with an indicator: (chi_E * g)(x), computed in the
/// transform domain with the analytic multiplier
///   m_E(p) = (e^{-ip alpha} - e^{-ip beta}) / (ip),  m_E(0) = beta - alpha.
/// Bin-center sampling of chi_E would cost O(dx) accuracy at the edges;
/// this path keeps spectral accuracy for smooth decaying g.
SampledFunction1D indicator_convolve(const IntervalSet& set,
                                     const SampledFunction1D& g);

/// (u_{E,sigma} * g)(x) for smooth decaying g, done entirely in the
/// transform domain: F[g] from the samples, then the analytic indicator
/// multiplier and the quadrature-exact bump transform omega_hat(sigma*p).
/// Sampling omega_sigma on the grid would leak its fat spectral tail into
/// the result; the multiplier route never samples the bump.
SampledFunction1D smooth_indicator_convolve(const SmoothIndicator& u,
                                            const SampledFunction1D& g);

/// CDF of the continuum-normalized unit bump, Omega(-1) = 0, Omega(1) = 1.
double bump_cdf(double s);
/// Continuum normalization constant c = 1 / \int_{-1}^{1} exp(-1/(1-t^2)) dt.
double bump_constant();
/// Fourier transform (2*pi)^{-1/2} \int omega(t) e^{-ikt} dt of the unit
/// bump; real and even in k.
double bump_fourier(double k);

}  // namespace whq
