#pragma once

#include "whq/grid.hpp"

namespace whq {

enum class Direction { forward, inverse };

/// Default relative floor for the edge-decay check. Inputs whose edge
/// magnitude exceeds floor * max|f| get a wraparound-risk warning.
inline constexpr double kEdgeDecayFloor = 1e-10;

/// Continuum-normalized Fourier transform on the zero-centred dual grid:
///   forward: F[f](p) = (2*pi)^{-1/2} \int f(x) e^{-ixp} dx
///   inverse: same with e^{+ixp}.
/// The discrete result samples the continuum transform exactly (rectangle
/// rule), with all grid-offset phase factors corrected.
SampledFunction1D fourier_1d(const SampledFunction1D& f, Direction dir,
                             double edge_floor = kEdgeDecayFloor);

/// Same transform evaluated on a caller-chosen output grid. The output
/// spacing must satisfy out.dx * f.dx = 2*pi/n; the offsets are free.
SampledFunction1D fourier_to_grid(const SampledFunction1D& f,
                                  const LineGrid& out, Direction dir,
                                  double edge_floor = kEdgeDecayFloor);

/// (f*g)(x) = \int f(x-y) g(y) dy on the common grid of f and g,
/// via transform-multiply-inverse with continuum normalization.
SampledFunction1D convolve_1d(const SampledFunction1D& f,
                              const SampledFunction1D& g);

/// Partial Fourier transform in the second (p) variable, row-wise:
/// Fhat_p(q, y) = (2*pi)^{-1/2} \int F(q,p) e^{-iyp} dp.
SampledFunction2D partial_fourier_p(const SampledFunction2D& F);

/// Symplectic Fourier transform
///   Fs[F](q,p) = \iint e^{-i(q p' - q' p)} F(q',p') dq' dp' / (2*pi),
/// dual=true flips both exponent signs (evaluation at (-q,-p)). Involutive.
SampledFunction2D symplectic_fourier(const SampledFunction2D& F,
                                     bool dual = false);

/// 2-D convolution (K*f)(q,p) over phase space, same grid in and out.
SampledFunction2D convolve_2d(const SampledFunction2D& K,
                              const SampledFunction2D& f);

/// Spectral derivative of given order (transform, multiply by (ip)^k, invert).
SampledFunction1D spectral_derivative(const SampledFunction1D& f, int order = 1);

/// Spectral translation: returns g with g(x) = f(x - shift).
SampledFunction1D translate(const SampledFunction1D& f, double shift);

/// True when the edge samples are below floor * max|f| (decay check).
bool edges_decay(const SampledFunction1D& f, double floor = kEdgeDecayFloor);

/// Trigonometric interpolation onto the doubled sampling rate: returns 2n
/// samples whose even entries reproduce the input exactly.
VectorXcd upsample_periodic_2x(const VectorXcd& v);

}  // namespace whq
