#include "whq/portrait.hpp"

#include <cmath>
#include <stdexcept>

namespace whq {

Portrait portrait_convolution(const SampledFunction2D& f, const Apodization& apod,
                              const std::string& source) {
  if (apod.is_weyl_wigner()) {
    return Portrait{f, source, PortraitPath::convolution_form};
  }
  if (!apod.portrait_kernel.has_value()) {
    throw std::invalid_argument("portrait_convolution: apodization has no cached kernel");
  }
  const SampledFunction2D& k = *apod.portrait_kernel;
  if (!k.grid.q_axis.same_as(f.grid.q_axis) || !k.grid.p_axis.same_as(f.grid.p_axis)) {
    throw std::invalid_argument("portrait_convolution: f must live on the apodization grid");
  }
  SampledFunction2D conv = convolve_2d(k, f);
  conv.values /= kTwoPi;
  return Portrait{std::move(conv), source, PortraitPath::convolution_form};
}

std::vector<double> portrait_trace(const OperatorMatrix& a, const Apodization& apod,
                                   const std::vector<PhasePoint>& points) {
  if (apod.is_weyl_wigner() || !apod.psi.has_value()) {
    throw std::invalid_argument(
        "portrait_trace: pure-state apodization required (no displaced state otherwise)");
  }
  const SampledFunction1D& psi = *apod.psi;
  if (!psi.grid.same_as(a.grid)) {
    throw std::invalid_argument("portrait_trace: operator grid differs from psi's grid");
  }
  std::vector<double> out;
  out.reserve(points.size());
  for (const PhasePoint& pt : points) {
    SampledFunction1D coherent = displace_state(psi, pt.q, pt.p);
    const VectorXcd acted = a.entries * coherent.values;
    const complexd val = a.grid.dx() * coherent.values.dot(acted);
    out.push_back(val.real());
  }
  return out;
}

double portrait_kernel_min(const Apodization& apod) {
  if (!apod.portrait_kernel.has_value()) {
    throw std::invalid_argument("portrait_kernel_min: no cached kernel");
  }
  return apod.portrait_kernel->values.real().minCoeff();
}

}  // namespace whq
