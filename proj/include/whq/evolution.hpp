#pragma once

#include <optional>

#include "whq/operator_analysis.hpp"
#include "whq/operator_matrix.hpp"

namespace whq {

struct TimeRecord {
  double t = 0.0;
  double norm = 0.0;
  double mean_x = 0.0;
  double mean_x2 = 0.0;
  double leakage = 0.0;  // mass outside E when a set was given, else 0
  double energy = 0.0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<SampledFunction1D> states;
  std::vector<TimeRecord> observables;
};

/// \int_{R \ E} |psi|^2 dx by grid quadrature (bin-center rule).
double leakage(const SampledFunction1D& psi, const IntervalSet& set);

/// Evolve psi0 under Hermitian H by eigenbasis expansion: one dense
/// decomposition, exact phases at every requested time.
Trajectory propagate_eigenbasis(const OperatorMatrix& h, const SampledFunction1D& psi0,
                                const std::vector<double>& times,
                                std::optional<IntervalSet> leakage_set = std::nullopt);

/// Infinite-well evolution on E: expansion in Dirichlet sine modes with
/// phases e^{-i E_n t}, E_n = (n pi / width)^2. psi0 must be supported in E.
Trajectory well_propagate(const IntervalSet& set, const SampledFunction1D& psi0,
                          const std::vector<double>& times);

/// Revival time 2 * width^2 / pi at which all well phases are commensurate.
double well_revival_time(const IntervalSet& set);

/// |<a, b>| / (|a| |b|) over the E-restricted quadrature inner product.
struct RestrictedFidelity {
  double fidelity = 0.0;
  double renormalization = 0.0;  // in-E norm of the line state
};
RestrictedFidelity fidelity_on_set(const SampledFunction1D& well_state,
                                   const SampledFunction1D& line_state,
                                   const IntervalSet& set);

struct EvolutionComparisonRow {
  double sharpness = 0.0;
  double t = 0.0;
  double fidelity = 0.0;
  double renormalization = 0.0;
  double leakage = 0.0;
  double mean_x_gap = 0.0;
  double mean_x2_gap = 0.0;
};

struct EvolutionComparison {
  std::vector<EvolutionComparisonRow> rows;
  /// Fidelity at the final common time per sharpness, in sweep order.
  std::vector<double> final_fidelities;
  bool fidelity_trend_monotone = false;
};

/// Compare the well evolution against the weighted-kinetic evolutions for a
/// family of weights (one per sharpness value). Exploratory: the trend flag
/// is reported, not asserted.
EvolutionComparison compare_evolutions(const IntervalSet& set,
                                       const std::vector<SampledFunction1D>& weights,
                                       const std::vector<double>& sharpness,
                                       const SampledFunction1D& psi0,
                                       const std::vector<double>& times,
                                       Scheme scheme = Scheme::spectral);

}  // namespace whq
