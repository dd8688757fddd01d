#pragma once

#include "whq/apodization.hpp"
#include "whq/operator_matrix.hpp"

namespace whq {

enum class PortraitPath { trace_form, convolution_form };

struct Portrait {
  SampledFunction2D values;
  std::string source;
  PortraitPath path;
};

/// Lower symbol by the condensed convolution form,
///   f_check = (1/2pi) (Fs_bar[Pi Pi~] * f),
/// using the kernel cached on the apodization. The Weyl-Wigner kind
/// returns f unchanged.
Portrait portrait_convolution(const SampledFunction2D& f, const Apodization& apod,
                              const std::string& source = "");

struct PhasePoint {
  double q;
  double p;
};

/// Lower symbol by the trace form, f_check(q,p) = <q,p| A |q,p> with the
/// coherent state U(q,p) psi, evaluated at the requested sample points.
/// Returns the values in the order of the points.
std::vector<double> portrait_trace(const OperatorMatrix& a, const Apodization& apod,
                                   const std::vector<PhasePoint>& points);

/// Minimum of the cached autocorrelation kernel over the grid (the paper
/// leaves open whether the underlying overlap map is a probability
/// distribution; this just reports the observed minimum).
double portrait_kernel_min(const Apodization& apod);

}  // namespace whq
