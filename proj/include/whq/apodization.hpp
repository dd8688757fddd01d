#pragma once

#include <memory>
#include <optional>

#include "whq/grid.hpp"
#include "whq/operator_matrix.hpp"
#include "whq/transforms.hpp"

namespace whq {

enum class ApodizationKind { weyl_wigner, pure_state };

/// Numerical status of the paper-level hypotheses on the apodization:
/// (1) the symplectic transform of Pi is non-negative, (2) the partial
/// transform Pi_hat_p is (at least) twice continuously differentiable,
/// proxied by second central differences shrinking quadratically under
/// coarsening, (3) Pi_hat_p(0, y) >= 0.
struct AssumptionReport {
  bool a1_pass = false;
  double a1_min = 0.0;
  bool a1_distributional = false;  // Pi = 1 case: Fs[1] = 2*pi*delta

  bool a2_pass = false;
  double a2_max_second_diff = 0.0;  // |D2|/h^2 curvature proxy at finest h
  double a2_refinement_ratio = 0.0;

  bool a3_pass = false;
  double a3_min = 0.0;

  bool distributional = false;
};

/// The apodization function Pi(q,p) with its derived 1-D profiles
/// gamma(x) (inverse transform of Pi(0,.)) and varpi(p) (transform of
/// Pi(.,0)), plus the cached autocorrelation kernel used by portraits.
struct Apodization {
  ApodizationKind kind;
  SampledFunction2D pi;
  std::optional<SampledFunction1D> psi;
  SampledFunction1D gamma;
  SampledFunction1D varpi;
  bool gamma_delta_like = false;  // Weyl-Wigner: gamma is a unit-mass spike
  bool even_flag = false;
  AssumptionReport assumption_report;
  /// (1/2pi)-normalized portrait kernel Fs_bar[Pi * Pi~]; absent for the
  /// Weyl-Wigner kind where the portrait is the identity map.
  std::optional<SampledFunction2D> portrait_kernel;

  bool is_weyl_wigner() const { return kind == ApodizationKind::weyl_wigner; }
};

/// Pi = 1 (Weyl-Wigner). gamma and varpi are represented as unit-mass
/// single-bin spikes at the origin; consumers treat them as identity
/// convolutions.
Apodization weyl_wigner_apodization(const PhaseGrid& grid);

/// Pi(q,p) = <psi| U(-q,-p) psi> for a normalized fiducial state, sampled on
/// the standard phase grid (q_axis = psi's grid, p_axis = its dual); both
/// are required so the derived profiles land back on psi's grid exactly.
Apodization pure_state_apodization(const SampledFunction1D& psi,
                                   const PhaseGrid& grid);

/// Wigner function of a normalized state,
///   W(q,p) = (1/2pi) \int e^{-iyp} conj(psi(q+y/2)) psi(q-y/2) dy,
/// on a phase grid whose q_axis matches psi's (symmetric) grid.
SampledFunction2D wigner_function(const SampledFunction1D& psi,
                                  const PhaseGrid& grid);

/// Unitary matrix of U(q,p) = e^{-iqp/2} e^{ipQ} e^{-iqP}, with the
/// translation realized as a transform-domain phase shift.
OperatorMatrix displacement_matrix(const LineGrid& grid, double q, double p);

/// Displaced state U(q,p) psi without forming the matrix.
SampledFunction1D displace_state(const SampledFunction1D& psi, double q, double p);

AssumptionReport validate_assumptions(const Apodization& apod);

}  // namespace whq
