#include "whq/apodization.hpp"

#include <cmath>
#include <stdexcept>

namespace whq {

namespace {

void require_standard_grid(const SampledFunction1D& psi, const PhaseGrid& grid,
                           const char* who) {
  if (!psi.grid.is_symmetric()) {
    throw std::invalid_argument(std::string(who) + ": psi grid must be zero-centred");
  }
  if (!grid.q_axis.same_as(psi.grid)) {
    throw std::invalid_argument(std::string(who) + ": phase grid q_axis must equal psi's grid");
  }
  if (!grid.p_axis.same_as(psi.grid.dual())) {
    throw std::invalid_argument(std::string(who) + ": phase grid p_axis must be the dual grid");
  }
}

SampledFunction1D unit_spike(const LineGrid& grid) {
  VectorXcd v = VectorXcd::Zero(grid.n());
  v[grid.nearest_index(0.0)] = 1.0 / grid.dx();
  return SampledFunction1D(grid, std::move(v));
}

// Second-difference refinement test along rows (axis = 1) or columns
// (axis = 0) of a real-ified array.
struct SecondDiffStats {
  double max_h = 0.0;   // max |D2| at spacing h
  double max_2h = 0.0;  // max |D2| at spacing 2h
};

SecondDiffStats second_diffs(const MatrixXcd& m, int axis) {
  SecondDiffStats s;
  const Eigen::Index rows = m.rows(), cols = m.cols();
  auto at = [&](Eigen::Index i, Eigen::Index k) {
    return axis == 1 ? m(i, k) : m(k, i);
  };
  const Eigen::Index outer = axis == 1 ? rows : cols;
  const Eigen::Index inner = axis == 1 ? cols : rows;
  for (Eigen::Index i = 0; i < outer; ++i) {
    for (Eigen::Index k = 1; k + 1 < inner; ++k) {
      s.max_h = std::max(s.max_h, std::abs(at(i, k + 1) - 2.0 * at(i, k) + at(i, k - 1)));
    }
    for (Eigen::Index k = 2; k + 2 < inner; ++k) {
      s.max_2h = std::max(s.max_2h, std::abs(at(i, k + 2) - 2.0 * at(i, k) + at(i, k - 2)));
    }
  }
  return s;
}

bool even_under_reflection(const MatrixXcd& pi, double tol) {
  const Eigen::Index nq = pi.rows(), np = pi.cols();
  double worst = 0.0;
  for (Eigen::Index i = 1; i < nq; ++i) {
    for (Eigen::Index j = 1; j < np; ++j) {
      worst = std::max(worst, std::abs(pi(i, j) - pi(nq - i, np - j)));
    }
  }
  return worst < tol;
}

SampledFunction2D portrait_kernel_of(const SampledFunction2D& pi) {
  const Eigen::Index nq = pi.values.rows(), np = pi.values.cols();
  MatrixXcd prod(nq, np);
  for (Eigen::Index i = 0; i < nq; ++i) {
    for (Eigen::Index j = 0; j < np; ++j) {
      // Pi~(q,p) = Pi(-q,-p), periodic reflection on the zero-centred grid
      prod(i, j) = pi.values(i, j) * pi.values((nq - i) % nq, (np - j) % np);
    }
  }
  return symplectic_fourier(SampledFunction2D(pi.grid, std::move(prod)), /*dual=*/true);
}

}  // namespace

Apodization weyl_wigner_apodization(const PhaseGrid& grid) {
  MatrixXcd ones = MatrixXcd::Constant(grid.q_axis.n(), grid.p_axis.n(), 1.0);
  Apodization apod{ApodizationKind::weyl_wigner,
                   SampledFunction2D(grid, std::move(ones)),
                   std::nullopt,
                   unit_spike(grid.q_axis),
                   unit_spike(grid.p_axis)};
  apod.gamma_delta_like = true;
  apod.even_flag = true;
  apod.assumption_report = validate_assumptions(apod);
  return apod;
}

Apodization pure_state_apodization(const SampledFunction1D& psi,
                                   const PhaseGrid& grid) {
  require_standard_grid(psi, grid, "pure_state_apodization");
  const double norm = psi.norm();
  if (std::abs(norm - 1.0) > 1e-8) {
    throw std::invalid_argument("pure_state_apodization: psi not normalized, |psi| = " +
                                std::to_string(norm));
  }
  const int n = psi.n();
  const LineGrid& xg = psi.grid;
  const LineGrid& pg = grid.p_axis;

  std::vector<std::string> warnings;
  if (!edges_decay(psi)) {
    warnings.push_back("pure_state_apodization: psi does not decay at grid edges");
  }

  // Pi(q,p) = e^{-iqp/2} * \int conj(psi(x)) psi(x+q) e^{-ipx} dx; the inner
  // integral is sqrt(2*pi) times the forward transform of the overlap
  // product, evaluated on the dual (= p) axis.
  MatrixXcd pi(n, n);
  for (int i = 0; i < n; ++i) {
    const double q = xg.point(i);
    SampledFunction1D shifted = translate(psi, -q);  // psi(x + q)
    VectorXcd overlap(n);
    for (int k = 0; k < n; ++k) overlap[k] = std::conj(psi.values[k]) * shifted.values[k];
    SampledFunction1D row =
        fourier_to_grid(SampledFunction1D(xg, std::move(overlap)), pg,
                        Direction::forward, 0.0);
    for (int j = 0; j < n; ++j) {
      pi(i, j) = kSqrtTwoPi * row.values[j] * std::polar(1.0, -0.5 * q * pg.point(j));
    }
  }

  SampledFunction2D pi_field(grid, std::move(pi));
  pi_field.warnings = warnings;

  const int iq0 = xg.nearest_index(0.0);
  const int ip0 = pg.nearest_index(0.0);
  const complexd pi00 = pi_field.values(iq0, ip0);
  if (std::abs(pi00 - 1.0) > 1e-8) {
    throw std::runtime_error("pure_state_apodization: Pi(0,0) != 1, got |Pi(0,0)-1| = " +
                             std::to_string(std::abs(pi00 - 1.0)));
  }
  if (pi_field.max_abs() > 1.0 + 1e-8) {
    throw std::runtime_error("pure_state_apodization: ||Pi||_inf exceeds 1");
  }

  // gamma(x) = (2*pi)^{-1/2} * inverse transform of Pi(0, .), back on psi's grid
  SampledFunction1D pi_row0(pg, pi_field.values.row(iq0).transpose());
  SampledFunction1D gamma = fourier_to_grid(pi_row0, xg, Direction::inverse, 0.0);
  gamma.values /= kSqrtTwoPi;

  // varpi(p) = (2*pi)^{-1/2} * forward transform of Pi(., 0)
  SampledFunction1D pi_col0(xg, pi_field.values.col(ip0));
  SampledFunction1D varpi = fourier_to_grid(pi_col0, pg, Direction::forward, 0.0);
  varpi.values /= kSqrtTwoPi;

  Apodization apod{ApodizationKind::pure_state, std::move(pi_field), psi,
                   std::move(gamma), std::move(varpi)};
  apod.even_flag = even_under_reflection(apod.pi.values, 1e-8);
  apod.assumption_report = validate_assumptions(apod);
  apod.portrait_kernel = portrait_kernel_of(apod.pi);
  return apod;
}

SampledFunction2D wigner_function(const SampledFunction1D& psi,
                                  const PhaseGrid& grid) {
  if (std::abs(psi.norm() - 1.0) > 1e-8) {
    throw std::invalid_argument("wigner_function: psi not normalized");
  }
  if (!psi.grid.is_symmetric() || !grid.q_axis.same_as(psi.grid)) {
    throw std::invalid_argument(
        "wigner_function: q_axis must equal psi's zero-centred grid");
  }
  const int n = psi.n();
  const int np = grid.p_axis.n();
  const double ds = 0.5 * psi.grid.dx();

  // W(q_i, p_j) = (1/pi) sum_l conj(psi(q_i+s_l)) psi(q_i-s_l) e^{-2 i p_j s_l} ds.
  // The e^{-2ips} factor doubles the frequency, so s must be sampled at half
  // the grid spacing or the p window folds over; psi is upsampled spectrally.
  const VectorXcd psi_fine = upsample_periodic_2x(psi.values);  // x_a = (a-n)*ds
  MatrixXcd g(n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int l = 0; l < 2 * n; ++l) {
      const int a = 2 * i + l - n;   // q_i + s_l
      const int b = 2 * i - l + n;   // q_i - s_l
      g(i, l) = (a >= 0 && a < 2 * n && b >= 0 && b < 2 * n)
                    ? std::conj(psi_fine[a]) * psi_fine[b]
                    : complexd(0.0, 0.0);
    }
  }
  MatrixXcd et(2 * n, np);  // et(l, j) = e^{-2 i p_j s_l} * ds / pi
  for (int l = 0; l < 2 * n; ++l) {
    const double s = (l - n) * ds;
    for (int j = 0; j < np; ++j) {
      et(l, j) = std::polar(ds / kPi, -2.0 * grid.p_axis.point(j) * s);
    }
  }
  MatrixXcd w = g * et;
  return SampledFunction2D(grid, std::move(w));
}

SampledFunction1D displace_state(const SampledFunction1D& psi, double q, double p) {
  // Symmetric splitting e^{ipQ/2} e^{-iqP} e^{ipQ/2}: equals
  // e^{-iqp/2} e^{ipx} psi(x-q) in the continuum, and makes the adjoint law
  // U(q,p)^dag = U(-q,-p) exact at the matrix level.
  VectorXcd pre(psi.n());
  for (int j = 0; j < psi.n(); ++j) {
    pre[j] = std::polar(1.0, 0.5 * p * psi.grid.point(j)) * psi.values[j];
  }
  SampledFunction1D shifted = translate(SampledFunction1D(psi.grid, std::move(pre)), q);
  VectorXcd v(psi.n());
  for (int j = 0; j < psi.n(); ++j) {
    v[j] = std::polar(1.0, 0.5 * p * psi.grid.point(j)) * shifted.values[j];
  }
  SampledFunction1D res(psi.grid, std::move(v));
  res.warnings = psi.warnings;
  return res;
}

OperatorMatrix displacement_matrix(const LineGrid& grid, double q, double p) {
  const int n = grid.n();
  MatrixXcd m(n, n);
  for (int j = 0; j < n; ++j) {
    VectorXcd e = VectorXcd::Zero(n);
    e[j] = 1.0;
    m.col(j) = displace_state(SampledFunction1D(grid, std::move(e)), q, p).values;
  }
  OperatorMatrix op(grid, std::move(m));
  if (std::abs(q) > 0.25 * grid.length()) {
    op.warnings.push_back("displacement_matrix: |q| exceeds a quarter of the domain, "
                          "shifted support may wrap");
  }
  return op;
}

AssumptionReport validate_assumptions(const Apodization& apod) {
  AssumptionReport rep;
  if (apod.is_weyl_wigner()) {
    // Fs[1] = 2*pi*delta: non-negative only in the measure sense.
    rep.distributional = true;
    rep.a1_distributional = true;
    return rep;
  }

  SampledFunction2D fs = symplectic_fourier(apod.pi, false);
  rep.a1_min = fs.values.real().minCoeff();
  rep.a1_pass = rep.a1_min >= -1e-9;

  SampledFunction2D pihat = partial_fourier_p(apod.pi);

  const int iq0 = pihat.grid.q_axis.nearest_index(0.0);
  rep.a3_min = pihat.values.row(iq0).real().minCoeff();
  rep.a3_pass = rep.a3_min >= -1e-9;

  const SecondDiffStats row_stats = second_diffs(pihat.values, 1);
  const SecondDiffStats col_stats = second_diffs(pihat.values, 0);
  const double scale = pihat.max_abs();
  auto direction_ok = [&](const SecondDiffStats& s) {
    if (s.max_h < 1e-12 * scale) return true;  // flat to rounding
    return s.max_2h / s.max_h >= 2.5;          // ~4 for C^2, ~1 for a jump
  };
  rep.a2_pass = direction_ok(row_stats) && direction_ok(col_stats);
  const double hy = pihat.grid.p_axis.dx();
  const double hq = pihat.grid.q_axis.dx();
  rep.a2_max_second_diff =
      std::max(row_stats.max_h / (hy * hy), col_stats.max_h / (hq * hq));
  rep.a2_refinement_ratio =
      std::min(row_stats.max_h > 0 ? row_stats.max_2h / row_stats.max_h : 4.0,
               col_stats.max_h > 0 ? col_stats.max_2h / col_stats.max_h : 4.0);
  return rep;
}

}  // namespace whq
