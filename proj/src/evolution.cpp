#include "whq/evolution.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace whq {

namespace {

TimeRecord observe(const SampledFunction1D& psi, double t,
                   const std::optional<IntervalSet>& set, double energy) {
  TimeRecord rec;
  rec.t = t;
  rec.norm = psi.norm();
  double mx = 0.0, mx2 = 0.0;
  for (int j = 0; j < psi.n(); ++j) {
    const double m = std::norm(psi.values[j]) * psi.grid.dx();
    const double x = psi.grid.point(j);
    mx += x * m;
    mx2 += x * x * m;
  }
  rec.mean_x = mx;
  rec.mean_x2 = mx2;
  rec.leakage = set.has_value() ? leakage(psi, *set) : 0.0;
  rec.energy = energy;
  return rec;
}

void check_times(const std::vector<double>& times) {
  if (times.empty()) throw std::invalid_argument("propagation: empty time list");
  for (size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) {
      throw std::invalid_argument("propagation: times must be strictly increasing");
    }
  }
}

}  // namespace

double leakage(const SampledFunction1D& psi, const IntervalSet& set) {
  double outside = 0.0;
  for (int j = 0; j < psi.n(); ++j) {
    if (!set.contains(psi.grid.point(j))) {
      outside += std::norm(psi.values[j]);
    }
  }
  return outside * psi.grid.dx();
}

Trajectory propagate_eigenbasis(const OperatorMatrix& h, const SampledFunction1D& psi0,
                                const std::vector<double>& times,
                                std::optional<IntervalSet> leakage_set) {
  if (!h.hermitian_flag) {
    throw std::invalid_argument("propagate_eigenbasis: H must be Hermitian");
  }
  if (!psi0.grid.same_as(h.grid)) {
    throw std::invalid_argument("propagate_eigenbasis: grid mismatch");
  }
  if (std::abs(psi0.norm() - 1.0) > 1e-8) {
    throw std::invalid_argument("propagate_eigenbasis: psi0 not normalized");
  }
  check_times(times);

  Eigen::SelfAdjointEigenSolver<MatrixXcd> solver(h.entries);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("propagate_eigenbasis: eigensolver failed");
  }
  const VectorXd& lambda = solver.eigenvalues();
  const MatrixXcd& v = solver.eigenvectors();
  const VectorXcd coeff = v.adjoint() * psi0.values;
  const double energy =
      (coeff.array().abs2() * lambda.array()).sum() / coeff.squaredNorm();

  Trajectory traj;
  for (double t : times) {
    VectorXcd phased(coeff.size());
    for (Eigen::Index k = 0; k < coeff.size(); ++k) {
      phased[k] = coeff[k] * std::polar(1.0, -lambda[k] * t);
    }
    SampledFunction1D psi(psi0.grid, v * phased);
    traj.observables.push_back(observe(psi, t, leakage_set, energy));
    traj.times.push_back(t);
    traj.states.push_back(std::move(psi));
  }
  return traj;
}

double well_revival_time(const IntervalSet& set) {
  return 2.0 * set.width() * set.width() / kPi;
}

Trajectory well_propagate(const IntervalSet& set, const SampledFunction1D& psi0,
                          const std::vector<double>& times) {
  check_times(times);
  const LineGrid& grid = psi0.grid;
  if (set.alpha < grid.x_min() || set.beta > grid.x_max()) {
    throw std::invalid_argument("well_propagate: E exits the grid");
  }
  // support check: psi0 must vanish outside E
  for (int j = 0; j < grid.n(); ++j) {
    if (!set.contains(grid.point(j)) && std::abs(psi0.values[j]) > 1e-10) {
      throw std::invalid_argument("well_propagate: psi0 has support outside E");
    }
  }
  const double w = set.width();
  const int n_modes = std::max(1, static_cast<int>(std::floor(w / grid.dx())) - 1);
  const std::vector<double> levels = well_reference_spectrum(set, n_modes);

  // Dirichlet modes sampled on the in-E bins
  std::vector<int> in_bins;
  for (int j = 0; j < grid.n(); ++j) {
    if (set.contains(grid.point(j))) in_bins.push_back(j);
  }
  MatrixXd modes(in_bins.size(), n_modes);
  const double amp = std::sqrt(2.0 / w);
  for (size_t r = 0; r < in_bins.size(); ++r) {
    const double x = grid.point(in_bins[r]);
    for (int m = 0; m < n_modes; ++m) {
      modes(r, m) = amp * std::sin((m + 1) * kPi * (x - set.alpha) / w);
    }
  }
  VectorXcd psi_in(in_bins.size());
  for (size_t r = 0; r < in_bins.size(); ++r) psi_in[r] = psi0.values[in_bins[r]];
  VectorXcd coeff = grid.dx() * (modes.transpose().cast<complexd>() * psi_in);

  double csum = 0.0, energy_num = 0.0;
  for (int m = 0; m < n_modes; ++m) {
    const double c2 = std::norm(coeff[m]);
    csum += c2;
    energy_num += levels[m] * c2;
  }
  const double energy = csum > 0 ? energy_num / csum : 0.0;

  Trajectory traj;
  for (double t : times) {
    VectorXcd phased(n_modes);
    for (int m = 0; m < n_modes; ++m) {
      phased[m] = coeff[m] * std::polar(1.0, -levels[m] * t);
    }
    VectorXcd inside = modes.cast<complexd>() * phased;
    VectorXcd full = VectorXcd::Zero(grid.n());
    for (size_t r = 0; r < in_bins.size(); ++r) full[in_bins[r]] = inside[r];
    SampledFunction1D psi(grid, std::move(full));
    traj.observables.push_back(observe(psi, t, set, energy));
    traj.times.push_back(t);
    traj.states.push_back(std::move(psi));
  }
  return traj;
}

RestrictedFidelity fidelity_on_set(const SampledFunction1D& well_state,
                                   const SampledFunction1D& line_state,
                                   const IntervalSet& set) {
  if (!well_state.grid.same_as(line_state.grid)) {
    throw std::invalid_argument("fidelity_on_set: grid mismatch");
  }
  const LineGrid& grid = well_state.grid;
  complexd overlap(0.0, 0.0);
  double na = 0.0, nb = 0.0;
  for (int j = 0; j < grid.n(); ++j) {
    if (!set.contains(grid.point(j))) continue;
    overlap += std::conj(well_state.values[j]) * line_state.values[j];
    na += std::norm(well_state.values[j]);
    nb += std::norm(line_state.values[j]);
  }
  RestrictedFidelity res;
  res.renormalization = std::sqrt(nb * grid.dx());
  if (na == 0.0 || nb == 0.0) return res;
  res.fidelity = std::abs(overlap) / std::sqrt(na * nb);
  return res;
}

EvolutionComparison compare_evolutions(const IntervalSet& set,
                                       const std::vector<SampledFunction1D>& weights,
                                       const std::vector<double>& sharpness,
                                       const SampledFunction1D& psi0,
                                       const std::vector<double>& times,
                                       Scheme scheme) {
  if (weights.size() != sharpness.size() || weights.empty()) {
    throw std::invalid_argument("compare_evolutions: weights/sharpness size mismatch");
  }
  Trajectory well = well_propagate(set, psi0, times);

  EvolutionComparison cmp;
  for (size_t s = 0; s < weights.size(); ++s) {
    WeightedOperator ka =
        weighted_operator(weights[s], WeightKind::kinetic, psi0.grid, scheme);
    Trajectory line = propagate_eigenbasis(ka.matrix, psi0, times, set);
    for (size_t i = 0; i < times.size(); ++i) {
      RestrictedFidelity fid = fidelity_on_set(well.states[i], line.states[i], set);
      EvolutionComparisonRow row;
      row.sharpness = sharpness[s];
      row.t = times[i];
      row.fidelity = fid.fidelity;
      row.renormalization = fid.renormalization;
      row.leakage = line.observables[i].leakage;
      row.mean_x_gap = line.observables[i].mean_x - well.observables[i].mean_x;
      row.mean_x2_gap = line.observables[i].mean_x2 - well.observables[i].mean_x2;
      cmp.rows.push_back(row);
      if (i + 1 == times.size()) cmp.final_fidelities.push_back(row.fidelity);
    }
  }
  cmp.fidelity_trend_monotone =
      std::is_sorted(cmp.final_fidelities.begin(), cmp.final_fidelities.end()) ||
      std::is_sorted(cmp.final_fidelities.rbegin(), cmp.final_fidelities.rend());
  return cmp;
}

}  // namespace whq
