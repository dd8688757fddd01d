#pragma once

#include "whq/apodization.hpp"
#include "whq/mollifiers.hpp"
#include "whq/operator_matrix.hpp"

namespace whq {

/// Multiplication-operator coefficients entering the quantized u*p^n:
///   w = u * gamma            (window)
///   b = -(u * t gamma(t))    (position correction, A_q = w(Q)Q + b(Q))
///   c = -i (u * psi conj(psi'))   (first-order momentum coefficient)
///   d = -(u * psi conj(psi''))    (second-order coefficient)
/// For the Weyl-Wigner kind the closed forms w = u, b = 0, c = -(i/2) u',
/// d = -(1/4) u'' are used instead.
struct CoefficientProfiles {
  SampledFunction1D w;
  SampledFunction1D b;
  SampledFunction1D c;
  SampledFunction1D d;
  std::string path_used;
};

/// w_u = u * gamma (identity for the Weyl-Wigner kind).
SampledFunction1D window_function(const SampledFunction1D& u, const Apodization& apod);
/// Indicator-aware overload: convolution against chi_E is done with the
/// analytic indicator transform, keeping spectral accuracy at the edges.
SampledFunction1D window_function(const SmoothIndicator& u, const Apodization& apod);

/// w_hat(p) = u_hat(p) * Pi(0, -p) on the dual grid.
SampledFunction1D window_fourier(const SampledFunction1D& u, const Apodization& apod);

CoefficientProfiles coefficient_profiles(const SampledFunction1D& u, const Apodization& apod);
CoefficientProfiles coefficient_profiles(const SmoothIndicator& u, const Apodization& apod);

/// Integral-kernel route: the matrix of A_f for a sampled decaying f on the
/// standard phase grid (q_axis = grid, p_axis = dual(grid)). Pure-state
/// apodizations use the fiducial-state kernel; the Weyl-Wigner kind uses the
/// midpoint closed form.
OperatorMatrix kernel(const SampledFunction2D& f, const Apodization& apod,
                      const LineGrid& grid);

/// Profile-assembly route for A_{u p^n}, n in {0,1,2}, built in the
/// symmetrized operator form with P applied spectrally (or by central
/// differences). hermitian_flag reflects the measured residual.
OperatorMatrix quantize_u_pn(const SampledFunction1D& u, int n, const Apodization& apod,
                             const LineGrid& grid, Scheme scheme = Scheme::spectral);
OperatorMatrix quantize_u_pn(const SmoothIndicator& u, int n, const Apodization& apod,
                             const LineGrid& grid, Scheme scheme = Scheme::spectral);

/// A_{u(q) q} = w_u(Q) Q + b_u(Q), exactly diagonal.
OperatorMatrix quantize_position(const SampledFunction1D& u, const Apodization& apod,
                                 const LineGrid& grid);
OperatorMatrix quantize_position(const SmoothIndicator& u, const Apodization& apod,
                                 const LineGrid& grid);

struct TruncatedObservables {
  OperatorMatrix a_q;
  OperatorMatrix a_p;
  OperatorMatrix a_p2;
  CoefficientProfiles profiles;
};

TruncatedObservables truncated_observables(const IntervalSet& set, double sigma,
                                           const Apodization& apod, const LineGrid& grid,
                                           Scheme scheme = Scheme::spectral);

struct TraceCheck {
  double lhs;
  double rhs;
  double abs_err;
};

/// Trace formula: Tr(A_f) vs \iint f dq dp / (2*pi).
TraceCheck trace_check(const OperatorMatrix& a, const SampledFunction2D& f);

}  // namespace whq
