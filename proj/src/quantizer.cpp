#include "whq/quantizer.hpp"

#include <cmath>
#include <stdexcept>

namespace whq {

namespace {

SampledFunction1D real_samples(const LineGrid& grid,
                               const std::function<double(double)>& f) {
  VectorXcd v(grid.n());
  for (int j = 0; j < grid.n(); ++j) v[j] = f(grid.point(j));
  return SampledFunction1D(grid, std::move(v));
}

// t * gamma(t) on gamma's grid.
SampledFunction1D times_x(const SampledFunction1D& f) {
  VectorXcd v(f.n());
  for (int j = 0; j < f.n(); ++j) v[j] = f.grid.point(j) * f.values[j];
  return SampledFunction1D(f.grid, std::move(v));
}

void require_pure_state(const Apodization& apod, const char* who) {
  if (apod.kind != ApodizationKind::pure_state || !apod.psi.has_value()) {
    throw std::invalid_argument(std::string(who) + ": pure-state apodization required");
  }
}

// psi * conj(psi^(k)) products feeding the c and d profiles.
SampledFunction1D psi_derivative_product(const Apodization& apod, int order) {
  const SampledFunction1D& psi = *apod.psi;
  SampledFunction1D dpsi = spectral_derivative(psi, order);
  VectorXcd v(psi.n());
  for (int j = 0; j < psi.n(); ++j) {
    v[j] = psi.values[j] * std::conj(dpsi.values[j]);
  }
  return SampledFunction1D(psi.grid, std::move(v));
}

// Weyl-Wigner closed forms; u must be smooth enough for spectral derivatives,
// or carry analytic derivatives (indicator case handled by the caller).
CoefficientProfiles weyl_profiles(const SampledFunction1D& u,
                                  const SampledFunction1D& du,
                                  const SampledFunction1D& ddu) {
  SampledFunction1D c(u.grid, complexd(0.0, -0.5) * du.values);
  SampledFunction1D d(u.grid, -0.25 * ddu.values);
  SampledFunction1D b(u.grid, VectorXcd::Zero(u.n()));
  return CoefficientProfiles{u, std::move(b), std::move(c), std::move(d),
                             "weyl_wigner_closed_form"};
}

const double kPsiSupportTol = 1e-18;

}  // namespace

SampledFunction1D window_function(const SampledFunction1D& u, const Apodization& apod) {
  if (apod.is_weyl_wigner()) return u;
  if (!u.grid.same_as(apod.gamma.grid)) {
    throw std::invalid_argument("window_function: grid mismatch with apodization");
  }
  return convolve_1d(u, apod.gamma);
}

SampledFunction1D window_function(const SmoothIndicator& u, const Apodization& apod) {
  if (apod.is_weyl_wigner()) return u.values;
  if (!u.values.grid.same_as(apod.gamma.grid)) {
    throw std::invalid_argument("window_function: grid mismatch with apodization");
  }
  return smooth_indicator_convolve(u, apod.gamma);
}

SampledFunction1D window_fourier(const SampledFunction1D& u, const Apodization& apod) {
  const LineGrid dual = u.grid.dual();
  SampledFunction1D uhat = fourier_to_grid(u, dual, Direction::forward, 0.0);
  if (apod.is_weyl_wigner()) return uhat;
  // Pi(0,-p) = sqrt(2*pi) * F[gamma](-p); reflect on the zero-centred dual grid.
  SampledFunction1D ghat = fourier_to_grid(apod.gamma, dual, Direction::forward, 0.0);
  const int n = dual.n();
  VectorXcd v(n);
  for (int k = 0; k < n; ++k) {
    const complexd pi0 = kSqrtTwoPi * ghat.values[(n - k) % n];
    v[k] = uhat.values[k] * pi0;
  }
  SampledFunction1D res(dual, std::move(v));
  res.warnings = uhat.warnings;
  return res;
}

CoefficientProfiles coefficient_profiles(const SampledFunction1D& u,
                                         const Apodization& apod) {
  if (apod.is_weyl_wigner()) {
    return weyl_profiles(u, spectral_derivative(u, 1), spectral_derivative(u, 2));
  }
  require_pure_state(apod, "coefficient_profiles");
  SampledFunction1D w = convolve_1d(u, apod.gamma);
  SampledFunction1D b(u.grid, -convolve_1d(u, times_x(apod.gamma)).values);
  SampledFunction1D c(u.grid,
                      complexd(0.0, -1.0) *
                          convolve_1d(u, psi_derivative_product(apod, 1)).values);
  SampledFunction1D d(u.grid, -convolve_1d(u, psi_derivative_product(apod, 2)).values);
  return CoefficientProfiles{std::move(w), std::move(b), std::move(c), std::move(d),
                             "pure_state_profiles"};
}

CoefficientProfiles coefficient_profiles(const SmoothIndicator& u,
                                         const Apodization& apod) {
  const LineGrid& grid = u.values.grid;
  if (apod.is_weyl_wigner()) {
    if (u.sigma == 0.0) {
      throw std::invalid_argument(
          "coefficient_profiles: Weyl-Wigner with a sharp indicator has "
          "distributional edge terms; use sigma > 0");
    }
    // analytic derivatives of u_{E,sigma}: u' = omega_sigma(x-alpha) - omega_sigma(x-beta)
    const double c0 = bump_constant();
    const double s = u.sigma;
    auto omega = [&](double t) {
      const double r = t / s;
      if (std::abs(r) >= 1.0) return 0.0;
      return (c0 / s) * std::exp(-1.0 / (1.0 - r * r));
    };
    auto domega = [&](double t) {
      const double r = t / s;
      if (std::abs(r) >= 1.0) return 0.0;
      const double g = 1.0 - r * r;
      return (c0 / (s * s)) * std::exp(-1.0 / g) * (-2.0 * r / (g * g));
    };
    SampledFunction1D du = real_samples(grid, [&](double x) {
      return omega(x - u.set.alpha) - omega(x - u.set.beta);
    });
    SampledFunction1D ddu = real_samples(grid, [&](double x) {
      return domega(x - u.set.alpha) - domega(x - u.set.beta);
    });
    return weyl_profiles(u.values, du, ddu);
  }
  require_pure_state(apod, "coefficient_profiles");
  SampledFunction1D w = smooth_indicator_convolve(u, apod.gamma);
  SampledFunction1D b(grid, -smooth_indicator_convolve(u, times_x(apod.gamma)).values);
  SampledFunction1D c(grid,
                      complexd(0.0, -1.0) *
                          smooth_indicator_convolve(u, psi_derivative_product(apod, 1)).values);
  SampledFunction1D d(grid,
                      -smooth_indicator_convolve(u, psi_derivative_product(apod, 2)).values);
  return CoefficientProfiles{std::move(w), std::move(b), std::move(c), std::move(d),
                             "pure_state_profiles_indicator"};
}

namespace {

// Multiply rows / columns by a diagonal without materializing it.
MatrixXcd anticommute_diag(const VectorXcd& diag, const MatrixXcd& op) {
  return diag.asDiagonal() * op + op * diag.asDiagonal();
}

// Shared assembly of the symmetrized operator forms from the profiles.
OperatorMatrix assemble_u_pn(const CoefficientProfiles& prof, int order,
                             const LineGrid& grid, Scheme scheme) {
  if (order == 0) {
    return diagonal_operator(grid, prof.w.values);
  }
  OperatorMatrix p = momentum_matrix(grid, scheme);
  if (order == 1) {
    // A_p = (1/2){w(Q),P} + (i/2) w'(Q) + c(Q)  ==  w(Q)P + c(Q)
    SampledFunction1D dw = spectral_derivative(prof.w, 1);
    MatrixXcd m = 0.5 * anticommute_diag(prof.w.values, p.entries);
    m.diagonal() += complexd(0.0, 0.5) * dw.values + prof.c.values;
    return OperatorMatrix(grid, std::move(m));
  }
  if (order == 2) {
    // A_{p^2} = (1/2){w,P^2} + (i/2){w',P} + {c,P} + i c'(Q) + d(Q),
    // the symmetrized rewrite of w P^2 + 2 c P + d.
    OperatorMatrix p2 = kinetic_matrix(grid, scheme);
    SampledFunction1D dw = spectral_derivative(prof.w, 1);
    SampledFunction1D dc = spectral_derivative(prof.c, 1);
    MatrixXcd m = 0.5 * anticommute_diag(prof.w.values, p2.entries);
    m += complexd(0.0, 0.5) * anticommute_diag(dw.values, p.entries);
    m += anticommute_diag(prof.c.values, p.entries);
    m.diagonal() += complexd(0.0, 1.0) * dc.values + prof.d.values;
    return OperatorMatrix(grid, std::move(m));
  }
  throw std::invalid_argument("quantize_u_pn: n > 2 unsupported");
}

}  // namespace

OperatorMatrix quantize_u_pn(const SampledFunction1D& u, int order, const Apodization& apod,
                             const LineGrid& grid, Scheme scheme) {
  if (!u.grid.same_as(grid)) throw std::invalid_argument("quantize_u_pn: grid mismatch");
  return assemble_u_pn(coefficient_profiles(u, apod), order, grid, scheme);
}

OperatorMatrix quantize_u_pn(const SmoothIndicator& u, int order, const Apodization& apod,
                             const LineGrid& grid, Scheme scheme) {
  if (!u.values.grid.same_as(grid)) throw std::invalid_argument("quantize_u_pn: grid mismatch");
  return assemble_u_pn(coefficient_profiles(u, apod), order, grid, scheme);
}

namespace {

OperatorMatrix position_from_profiles(const CoefficientProfiles& prof,
                                      const LineGrid& grid) {
  VectorXcd diag(grid.n());
  for (int j = 0; j < grid.n(); ++j) {
    diag[j] = grid.point(j) * prof.w.values[j] + prof.b.values[j];
  }
  return diagonal_operator(grid, diag);
}

}  // namespace

OperatorMatrix quantize_position(const SampledFunction1D& u, const Apodization& apod,
                                 const LineGrid& grid) {
  if (!u.grid.same_as(grid)) throw std::invalid_argument("quantize_position: grid mismatch");
  return position_from_profiles(coefficient_profiles(u, apod), grid);
}

OperatorMatrix quantize_position(const SmoothIndicator& u, const Apodization& apod,
                                 const LineGrid& grid) {
  if (!u.values.grid.same_as(grid)) {
    throw std::invalid_argument("quantize_position: grid mismatch");
  }
  return position_from_profiles(coefficient_profiles(u, apod), grid);
}

TruncatedObservables truncated_observables(const IntervalSet& set, double sigma,
                                           const Apodization& apod, const LineGrid& grid,
                                           Scheme scheme) {
  SmoothIndicator u = smooth_indicator(set, sigma, grid);
  CoefficientProfiles prof = coefficient_profiles(u, apod);
  OperatorMatrix a_q = position_from_profiles(prof, grid);
  OperatorMatrix a_p = assemble_u_pn(prof, 1, grid, scheme);
  OperatorMatrix a_p2 = assemble_u_pn(prof, 2, grid, scheme);
  return TruncatedObservables{std::move(a_q), std::move(a_p), std::move(a_p2),
                              std::move(prof)};
}

namespace {

void require_standard_kernel_grids(const SampledFunction2D& f, const LineGrid& grid,
                                   const char* who) {
  if (!grid.is_symmetric()) {
    throw std::invalid_argument(std::string(who) + ": operator grid must be zero-centred");
  }
  if (!f.grid.q_axis.same_as(grid) || !f.grid.p_axis.same_as(grid.dual())) {
    throw std::invalid_argument(std::string(who) +
                                ": f must live on the standard phase grid of the operator grid");
  }
}

// f_hat_p(q_m, y_d) for all lattice differences y_d = (d - (n-1)) * dx,
// d = 0 .. 2n-2, by direct evaluation against the p axis.
MatrixXcd partial_transform_at_differences(const SampledFunction2D& f,
                                           const LineGrid& grid) {
  const int n = grid.n();
  const LineGrid& paxis = f.grid.p_axis;
  const int np = paxis.n();
  const double dp = paxis.dx();
  MatrixXcd e(np, 2 * n - 1);  // e(l, d) = e^{-i y_d p_l} * dp / sqrt(2*pi)
  for (int l = 0; l < np; ++l) {
    const double p = paxis.point(l);
    for (int d = 0; d < 2 * n - 1; ++d) {
      const double y = (d - (n - 1)) * grid.dx();
      e(l, d) = std::polar(dp / kSqrtTwoPi, -y * p);
    }
  }
  return f.values * e;  // (n_q x 2n-1)
}

OperatorMatrix kernel_weyl(const SampledFunction2D& f, const LineGrid& grid) {
  const int n = grid.n();
  // Upsample f in q so the midpoint lattice (x_i + x_j)/2 is exact.
  MatrixXcd fine(2 * n, f.grid.p_axis.n());
  for (int l = 0; l < f.grid.p_axis.n(); ++l) {
    fine.col(l) = upsample_periodic_2x(f.values.col(l));
  }
  const LineGrid& paxis = f.grid.p_axis;
  const int np = paxis.n();
  const double dp = paxis.dx();
  MatrixXcd e(np, 2 * n - 1);
  for (int l = 0; l < np; ++l) {
    const double p = paxis.point(l);
    for (int d = 0; d < 2 * n - 1; ++d) {
      const double y = (d - (n - 1)) * grid.dx();
      e(l, d) = std::polar(dp / kSqrtTwoPi, -y * p);
    }
  }
  MatrixXcd fh = fine * e;  // (2n x 2n-1): f_hat_p(midpoint s, y_d)
  MatrixXcd a(n, n);
  const double scale = grid.dx() / kSqrtTwoPi;  // direct entries = dx * kernel
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      a(i, j) = scale * fh(i + j, (j - i) + (n - 1));
    }
  }
  return OperatorMatrix(grid, std::move(a));
}

}  // namespace

OperatorMatrix kernel(const SampledFunction2D& f, const Apodization& apod,
                      const LineGrid& grid) {
  require_standard_kernel_grids(f, grid, "kernel");
  if (apod.is_weyl_wigner()) {
    return kernel_weyl(f, grid);
  }
  require_pure_state(apod, "kernel");
  const SampledFunction1D& psi = *apod.psi;
  if (!psi.grid.same_as(grid)) {
    throw std::invalid_argument("kernel: apodization fiducial state lives on another grid");
  }
  const int n = grid.n();
  const int half = n / 2;
  MatrixXcd fh = partial_transform_at_differences(f, grid);

  // A(x_i, x_j) = (dq / sqrt(2*pi)) sum_m fh(m, j-i) psi(x_i - q_m) conj(psi(x_j - q_m));
  // direct entries carry an extra dx. Collapsed over the support of the
  // psi-pair product: with k = i - m + n/2, the pair is psi_k conj(psi_{k + j - i}).
  const double scale = grid.dx() * grid.dx() / kSqrtTwoPi;
  const double psi_max = psi.max_abs();
  MatrixXcd a = MatrixXcd::Zero(n, n);
  for (int d = -(n - 1); d <= n - 1; ++d) {
    // pair_d[k] = psi_k * conj(psi_{k+d}), nonzero only where both live
    const int k_lo = std::max(0, -d);
    const int k_hi = std::min(n, n - d);
    int lo = -1, hi = -1;
    std::vector<complexd> pair(std::max(0, k_hi - k_lo));
    for (int k = k_lo; k < k_hi; ++k) {
      const complexd z = psi.values[k] * std::conj(psi.values[k + d]);
      pair[k - k_lo] = z;
      if (std::abs(z) > kPsiSupportTol * psi_max * psi_max) {
        if (lo < 0) lo = k;
        hi = k;
      }
    }
    if (lo < 0) continue;
    const int col = d + (n - 1);
    for (int i = 0; i < n; ++i) {
      const int j = i + d;
      if (j < 0 || j >= n) continue;
      complexd acc(0.0, 0.0);
      for (int k = lo; k <= hi; ++k) {
        const int m = i - k + half;  // q index
        if (m < 0 || m >= n) continue;
        acc += fh(m, col) * pair[k - k_lo];
      }
      a(i, j) = scale * acc;
    }
  }
  OperatorMatrix res(grid, std::move(a));
  for (const auto& w : f.warnings) res.warnings.push_back(w);
  return res;
}

TraceCheck trace_check(const OperatorMatrix& a, const SampledFunction2D& f) {
  const double lhs = a.trace().real();
  const double rhs = f.integral().real() / kTwoPi;
  return TraceCheck{lhs, rhs, std::abs(lhs - rhs)};
}

}  // namespace whq
