#include "whq/operator_analysis.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace whq {

namespace {

constexpr double kNonNormalizableGrowth = 13.815510557964274;  // log(1e6)
constexpr double kNormalizableGrowth = 1e-6;                   // log(1 + 1e-6) ~ 1e-6
constexpr double kLogExpCap = 690.0;  // exp() beyond this would overflow

double exp_capped(double x) { return x > kLogExpCap ? 1e299 : std::exp(x); }

double log_sum_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

}  // namespace

WeightedOperator weighted_operator(const SampledFunction1D& a, WeightKind kind,
                                   const LineGrid& grid, Scheme scheme) {
  if (!a.grid.same_as(grid)) {
    throw std::invalid_argument("weighted_operator: grid mismatch");
  }
  double a_max = 0.0;
  for (int j = 0; j < a.n(); ++j) {
    if (std::abs(a.values[j].imag()) > 1e-14 * (1.0 + std::abs(a.values[j].real()))) {
      throw std::invalid_argument("weighted_operator: a must be real");
    }
    const double v = a.values[j].real();
    if (v < 0.0) {
      throw std::invalid_argument("weighted_operator: a must be nonnegative, a(" +
                                  std::to_string(grid.point(j)) + ") = " + std::to_string(v));
    }
    a_max = std::max(a_max, v);
  }
  OperatorMatrix base = (kind == WeightKind::momentum) ? momentum_matrix(grid, scheme)
                                                       : kinetic_matrix(grid, scheme);
  VectorXcd diag = a.values;
  MatrixXcd m = diag.asDiagonal() * base.entries * diag.asDiagonal();
  OperatorMatrix op(grid, std::move(m));
  if (!op.hermitian_flag) {
    throw std::runtime_error("weighted_operator: hermiticity residual above tolerance");
  }
  return WeightedOperator{a, kind, std::move(op), a_max};
}

SpectrumResult spectrum(const OperatorMatrix& m, std::optional<int> k) {
  if (!m.hermitian_flag) {
    throw std::invalid_argument("spectrum: operator is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<MatrixXcd> solver(m.entries);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("spectrum: eigensolver failed to converge");
  }
  const int n = m.n();
  const int keep = k.has_value() ? std::min(*k, n) : n;

  SpectrumResult res;
  res.eigenvalues = solver.eigenvalues().head(keep);
  res.eigenvectors = solver.eigenvectors().leftCols(keep);
  // quadrature normalization: columns have unit l2 norm, rescale by 1/sqrt(dx)
  res.eigenvectors /= std::sqrt(m.grid.dx());
  res.residuals.resize(keep);
  for (int i = 0; i < keep; ++i) {
    VectorXcd v = solver.eigenvectors().col(i);
    res.residuals[i] = (m.entries * v - res.eigenvalues[i] * v).norm();
  }
  return res;
}

namespace {

DeficiencyBranch branch_analysis(const VectorXd& log_g_sq, const VectorXd& x,
                                 const std::vector<double>& windows, double dx) {
  DeficiencyBranch br;
  for (double L : windows) {
    double acc = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < x.size(); ++j) {
      if (std::abs(x[j]) <= L) acc = log_sum_exp(acc, log_g_sq[j]);
    }
    br.window_log_masses.push_back(acc + std::log(dx));
  }
  const size_t m = br.window_log_masses.size();
  br.log_norm_growth = br.window_log_masses[m - 1] - br.window_log_masses[m - 2];
  br.normalizable = br.log_norm_growth < kNormalizableGrowth;
  return br;
}

}  // namespace

DeficiencyReport deficiency_analysis(const SampledFunction1D& a,
                                     DeficiencyDomain domain,
                                     std::optional<IntervalSet> set) {
  DeficiencyReport rep;

  if (domain == DeficiencyDomain::interval) {
    // Momentum compressed to L^2(E) by the sharp indicator: the deficiency
    // functions are e^{-+x} on the bounded interval, always normalizable.
    if (!set.has_value()) {
      throw std::invalid_argument("deficiency_analysis: interval domain needs the set E");
    }
    const double al = set->alpha, be = set->beta;
    auto mass = [&](double sign) {
      // \int_alpha^beta e^{2*sign*x} dx
      return (std::exp(2.0 * sign * be) - std::exp(2.0 * sign * al)) / (2.0 * sign);
    };
    rep.plus_branch.normalizable = true;
    rep.plus_branch.window_log_masses = {std::log(mass(-1.0))};
    rep.plus_branch.log_norm_growth = 0.0;
    rep.minus_branch.normalizable = true;
    rep.minus_branch.window_log_masses = {std::log(mass(+1.0))};
    rep.minus_branch.log_norm_growth = 0.0;
    rep.n_plus = 1;
    rep.n_minus = 1;
    rep.verdict = DeficiencyVerdict::deficient;
    return rep;
  }

  const LineGrid& grid = a.grid;
  const int n = grid.n();
  const double dx = grid.dx();

  // candidate truncation windows, grid permitting
  const double x_span = std::min(std::abs(grid.x_min()), std::abs(grid.x_max()));
  for (double L : {5.0, 10.0, 20.0, 40.0}) {
    if (L <= x_span + 1e-12) rep.windows_used.push_back(L);
  }
  if (rep.windows_used.size() < 2) {
    throw std::invalid_argument(
        "deficiency_analysis: grid too small, need at least windows [-5,5] and [-10,10]");
  }
  const double l_max = rep.windows_used.back();

  // interior zeros of a abort the whole-line analysis
  for (int j = 0; j < n; ++j) {
    const double x = grid.point(j);
    if (std::abs(x) <= l_max && a.values[j].real() <= 0.0) {
      rep.zero_locations.push_back(x);
    }
  }
  if (!rep.zero_locations.empty()) {
    rep.verdict = DeficiencyVerdict::inconclusive;
    return rep;
  }

  // I(x) = \int_0^x a^{-2} dt, accumulated in log space outward from 0.
  // J[j] = log |I(x_j)| ; sign of I follows the sign of x.
  const int j0 = grid.nearest_index(0.0);
  VectorXd log_inv_a_sq(n);
  for (int j = 0; j < n; ++j) {
    log_inv_a_sq[j] = -2.0 * std::log(a.values[j].real());
  }
  VectorXd j_log(n);
  j_log.setConstant(-std::numeric_limits<double>::infinity());
  const double logdx = std::log(dx);
  for (int j = j0 + 1; j < n; ++j) {
    // trapezoid step in log space: log(dx * (a_prev^-2 + a_cur^-2)/2)
    const double step =
        logdx + log_sum_exp(log_inv_a_sq[j - 1], log_inv_a_sq[j]) - std::log(2.0);
    j_log[j] = log_sum_exp(j_log[j - 1], step);
  }
  for (int j = j0 - 1; j >= 0; --j) {
    const double step =
        logdx + log_sum_exp(log_inv_a_sq[j + 1], log_inv_a_sq[j]) - std::log(2.0);
    j_log[j] = log_sum_exp(j_log[j + 1], step);
  }

  // log |g(x)|^2 = -+ 2 I(x) - 2 log a(x); the capped exponential keeps the
  // astronomically blown-up side finite-huge instead of inf.
  VectorXd x_pts = grid.points();
  VectorXd log_g_plus(n), log_g_minus(n);
  for (int j = 0; j < n; ++j) {
    const double magnitude = exp_capped(j_log[j]);
    const double signed_i = (x_pts[j] >= grid.point(j0)) ? magnitude : -magnitude;
    const double la = std::log(a.values[j].real());
    log_g_plus[j] = std::min(-2.0 * signed_i - 2.0 * la, 1e300);
    log_g_minus[j] = std::min(2.0 * signed_i - 2.0 * la, 1e300);
  }

  rep.plus_branch = branch_analysis(log_g_plus, x_pts, rep.windows_used, dx);
  rep.minus_branch = branch_analysis(log_g_minus, x_pts, rep.windows_used, dx);
  rep.n_plus = rep.plus_branch.normalizable ? 1 : 0;
  rep.n_minus = rep.minus_branch.normalizable ? 1 : 0;

  const bool plus_diverges = rep.plus_branch.log_norm_growth > kNonNormalizableGrowth;
  const bool minus_diverges = rep.minus_branch.log_norm_growth > kNonNormalizableGrowth;
  if (plus_diverges && minus_diverges) {
    rep.verdict = DeficiencyVerdict::essentially_self_adjoint;
  } else if (rep.plus_branch.normalizable && rep.minus_branch.normalizable) {
    rep.verdict = DeficiencyVerdict::deficient;
  } else {
    rep.verdict = DeficiencyVerdict::inconclusive;
  }
  return rep;
}

std::vector<double> well_reference_spectrum(const IntervalSet& set, int n_max) {
  if (n_max < 1) throw std::invalid_argument("well_reference_spectrum: n_max >= 1 required");
  std::vector<double> levels(n_max);
  const double w = set.width();
  for (int n = 1; n <= n_max; ++n) {
    levels[n - 1] = (n * kPi / w) * (n * kPi / w);
  }
  return levels;
}

double mass_in_set(const SampledFunction1D& v, const IntervalSet& set) {
  double inside = 0.0, total = 0.0;
  for (int j = 0; j < v.n(); ++j) {
    const double m = std::norm(v.values[j]);
    total += m;
    if (set.contains(v.grid.point(j))) inside += m;
  }
  return total > 0.0 ? inside / total : 0.0;
}

SpectrumComparison compare_spectra(const WeightedOperator& k_a, const IntervalSet& set,
                                   int levels, double sharpness) {
  if (k_a.kind != WeightKind::kinetic) {
    throw std::invalid_argument("compare_spectra: kinetic weighted operator required");
  }
  SpectrumResult spec = spectrum(k_a.matrix);
  const std::vector<double> well = well_reference_spectrum(set, levels);

  SpectrumComparison cmp;
  cmp.sharpness = sharpness;
  std::vector<int> candidates;
  for (int i = 0; i < spec.eigenvalues.size() && (int)candidates.size() < levels; ++i) {
    SampledFunction1D v(k_a.matrix.grid, spec.eigenvectors.col(i));
    if (mass_in_set(v, set) >= 0.5) candidates.push_back(i);
  }
  bool padded = false;
  for (int i = 0; i < spec.eigenvalues.size() && (int)candidates.size() < levels; ++i) {
    if (std::find(candidates.begin(), candidates.end(), i) == candidates.end()) {
      candidates.push_back(i);
      padded = true;
    }
  }
  if (padded) std::sort(candidates.begin(), candidates.end());

  for (int lev = 0; lev < levels && lev < (int)candidates.size(); ++lev) {
    const int idx = candidates[lev];
    SampledFunction1D v(k_a.matrix.grid, spec.eigenvectors.col(idx));
    SpectrumComparisonRow row;
    row.level = lev + 1;
    row.eigenvalue = spec.eigenvalues[idx];
    row.well_value = well[lev];
    row.relative_gap = (row.eigenvalue - row.well_value) / row.well_value;
    row.mass_in_set = mass_in_set(v, set);
    row.localized = row.mass_in_set >= 0.5;
    cmp.rows.push_back(row);
  }
  return cmp;
}

}  // namespace whq
