#pragma once

#include <optional>

#include "whq/mollifiers.hpp"
#include "whq/operator_matrix.hpp"

namespace whq {

enum class WeightKind { momentum, kinetic };

/// P_a = A P A (momentum) or K_a = A P^2 A (kinetic) with A = diag(a),
/// a real and nonnegative. Hermitian by construction; the residual is
/// measured and asserted, not assumed.
struct WeightedOperator {
  SampledFunction1D a;
  WeightKind kind;
  OperatorMatrix matrix;
  double a_max;
};

WeightedOperator weighted_operator(const SampledFunction1D& a, WeightKind kind,
                                   const LineGrid& grid, Scheme scheme = Scheme::spectral);

struct SpectrumResult {
  VectorXd eigenvalues;          // ascending
  MatrixXcd eigenvectors;        // columns, quadrature-orthonormal
  VectorXd residuals;            // ||M v - lambda v||_2 per pair
};

/// Dense Hermitian eigendecomposition; k limits the returned lowest pairs.
SpectrumResult spectrum(const OperatorMatrix& m, std::optional<int> k = std::nullopt);

enum class DeficiencyDomain { whole_line, interval };
enum class DeficiencyVerdict { essentially_self_adjoint, deficient, inconclusive };

struct DeficiencyBranch {
  double log_norm_growth = 0.0;  // log-mass increment between the last two windows
  bool normalizable = false;
  std::vector<double> window_log_masses;
};

/// Numerical deficiency-index analysis of P_a via the exact reduction of
/// P_a* g = +-i g: with h = a g, log|h(x)| = log|h(0)| -+ \int_0^x a^{-2},
/// an exact quadrature done in log space (a^{-2} overflows doubles in
/// gaussian tails). Normalizability is decided from the L2 mass over
/// growing windows [-L, L], L in {5, 10, 20, 40} intersected with the grid:
/// non-normalizable requires the last log-mass increment to exceed log(1e6),
/// normalizable requires it to vanish within 1e-6.
struct DeficiencyReport {
  DeficiencyBranch plus_branch;
  DeficiencyBranch minus_branch;
  int n_plus = 0;
  int n_minus = 0;
  DeficiencyVerdict verdict = DeficiencyVerdict::inconclusive;
  std::vector<double> zero_locations;  // interior zeros of a (whole-line mode)
  std::vector<double> windows_used;
};

DeficiencyReport deficiency_analysis(const SampledFunction1D& a,
                                     DeficiencyDomain domain,
                                     std::optional<IntervalSet> set = std::nullopt);

/// Dirichlet well levels E_n = (n*pi/(beta-alpha))^2, n = 1..n_max.
std::vector<double> well_reference_spectrum(const IntervalSet& set, int n_max);

struct SpectrumComparisonRow {
  int level = 0;                // 1-based well level
  double eigenvalue = 0.0;      // K_a eigenvalue matched to this level
  double well_value = 0.0;
  double relative_gap = 0.0;    // (eigenvalue - well) / well
  double mass_in_set = 0.0;
  bool localized = false;       // passed the 50% mass filter
};

struct SpectrumComparison {
  double sharpness = 0.0;       // sweep parameter (sigma, or 0 for closed forms)
  std::vector<SpectrumComparisonRow> rows;
};

/// Lowest-level comparison of a weighted kinetic operator against the well
/// spectrum. Eigenvectors need >= 50% quadrature mass inside E to be matched
/// to a well level; if too few qualify, unlocalized rows pad the table.
SpectrumComparison compare_spectra(const WeightedOperator& k_a, const IntervalSet& set,
                                   int levels, double sharpness);

/// Quadrature mass fraction of a vector inside E (bin-center rule).
double mass_in_set(const SampledFunction1D& v, const IntervalSet& set);

}  // namespace whq
