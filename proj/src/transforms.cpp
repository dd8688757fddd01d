#include "whq/transforms.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <stdexcept>

namespace whq {

namespace {

// FFTW plan creation is not thread-safe; execution of a fresh plan on its
// own buffers is. One lock around planning keeps the module reentrant.
std::mutex g_fftw_mutex;

// Raw unnormalized DFT: out_k = sum_j in_j exp(sign * 2*pi*i*jk/n).
// sign = -1 matches FFTW_FORWARD.
VectorXcd raw_dft(const VectorXcd& in, int sign) {
  const int n = static_cast<int>(in.size());
  VectorXcd out(n);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(g_fftw_mutex);
    plan = fftw_plan_dft_1d(
        n,
        reinterpret_cast<fftw_complex*>(const_cast<complexd*>(in.data())),
        reinterpret_cast<fftw_complex*>(out.data()),
        sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(g_fftw_mutex);
    fftw_destroy_plan(plan);
  }
  return out;
}

void check_dual_compatible(const LineGrid& in, const LineGrid& out) {
  if (out.n() != in.n()) {
    throw std::invalid_argument("fourier_to_grid: output grid size mismatch");
  }
  const double product = out.dx() * in.dx() * in.n();
  if (std::abs(product - kTwoPi) > 1e-9) {
    throw std::invalid_argument(
        "fourier_to_grid: output spacing incompatible, need dz*dx = 2*pi/n");
  }
}

}  // namespace

bool edges_decay(const SampledFunction1D& f, double floor) {
  const double m = f.max_abs();
  if (m == 0.0) return true;
  const double edge = std::max(std::abs(f.values[0]), std::abs(f.values[f.n() - 1]));
  return edge <= floor * m;
}

SampledFunction1D fourier_to_grid(const SampledFunction1D& f,
                                  const LineGrid& out, Direction dir,
                                  double edge_floor) {
  check_dual_compatible(f.grid, out);
  const int n = f.n();
  const double s = (dir == Direction::forward) ? -1.0 : 1.0;
  const double y_min = f.grid.x_min();
  const double z_off = out.x_min();

  // z_l*y_k = z_off*y_k + (z_l - z_off)*y_min + 2*pi*l*k/n, so the offset
  // phases factor out of the raw DFT.
  VectorXcd pre(n);
  for (int k = 0; k < n; ++k) {
    const double yk = f.grid.point(k);
    pre[k] = f.values[k] * std::polar(1.0, s * z_off * yk);
  }
  VectorXcd raw = raw_dft(pre, dir == Direction::forward ? -1 : +1);
  const double scale = f.grid.dx() / kSqrtTwoPi;
  VectorXcd res(n);
  for (int l = 0; l < n; ++l) {
    res[l] = raw[l] * (scale * std::polar(1.0, s * (out.point(l) - z_off) * y_min));
  }
  SampledFunction1D g(out, std::move(res));
  g.warnings = f.warnings;
  if (!edges_decay(f, edge_floor)) {
    g.warnings.push_back("transform input does not decay at grid edges (wraparound risk)");
  }
  return g;
}

SampledFunction1D fourier_1d(const SampledFunction1D& f, Direction dir,
                             double edge_floor) {
  return fourier_to_grid(f, f.grid.dual(), dir, edge_floor);
}

SampledFunction1D convolve_1d(const SampledFunction1D& f,
                              const SampledFunction1D& g) {
  if (!f.grid.same_as(g.grid)) {
    throw std::invalid_argument("convolve_1d: grid mismatch");
  }
  const LineGrid dual = f.grid.dual();
  SampledFunction1D F = fourier_to_grid(f, dual, Direction::forward, 0.0);
  SampledFunction1D G = fourier_to_grid(g, dual, Direction::forward, 0.0);
  VectorXcd prod = kSqrtTwoPi * F.values.cwiseProduct(G.values);
  SampledFunction1D H(dual, std::move(prod));
  SampledFunction1D res = fourier_to_grid(H, f.grid, Direction::inverse, 0.0);
  res.warnings.clear();
  for (const auto& w : f.warnings) res.warnings.push_back(w);
  for (const auto& w : g.warnings) res.warnings.push_back(w);
  return res;
}

SampledFunction2D partial_fourier_p(const SampledFunction2D& F) {
  const LineGrid dual_p = F.grid.p_axis.dual();
  MatrixXcd out(F.nq(), F.np());
  bool decay_warned = false;
  for (int i = 0; i < F.nq(); ++i) {
    SampledFunction1D row(F.grid.p_axis, F.values.row(i).transpose());
    SampledFunction1D tr = fourier_to_grid(row, dual_p, Direction::forward, 0.0);
    out.row(i) = tr.values.transpose();
    if (!decay_warned && !edges_decay(row)) decay_warned = true;
  }
  SampledFunction2D res(PhaseGrid{F.grid.q_axis, dual_p}, std::move(out));
  res.warnings = F.warnings;
  if (decay_warned) {
    res.warnings.push_back("partial_fourier_p: rows do not decay at p edges");
  }
  return res;
}

SampledFunction2D symplectic_fourier(const SampledFunction2D& F, bool dual) {
  // Fs[F](q,p) = (1/2pi) \iint e^{-i q p'} e^{+i q' p} F(q',p') dq' dp'.
  // Step 1 transforms rows over p' (forward for Fs), frequency named q;
  // step 2 transforms columns over q' (inverse for Fs), frequency named p;
  // the result is the transpose of the step-2 array.
  const Direction step1 = dual ? Direction::inverse : Direction::forward;
  const Direction step2 = dual ? Direction::forward : Direction::inverse;

  const LineGrid uq = F.grid.p_axis.dual();  // new q axis
  const LineGrid vp = F.grid.q_axis.dual();  // new p axis

  bool decay_warned = false;
  MatrixXcd g(F.nq(), F.np());
  for (int i = 0; i < F.nq(); ++i) {
    SampledFunction1D row(F.grid.p_axis, F.values.row(i).transpose());
    if (!decay_warned && !edges_decay(row)) decay_warned = true;
    g.row(i) = fourier_to_grid(row, uq, step1, 0.0).values.transpose();
  }
  MatrixXcd h(F.grid.q_axis.n(), uq.n());
  for (int j = 0; j < uq.n(); ++j) {
    SampledFunction1D col(F.grid.q_axis, g.col(j));
    if (!decay_warned && !edges_decay(col)) decay_warned = true;
    h.col(j) = fourier_to_grid(col, vp, step2, 0.0).values;
  }
  // h(v-index over vp, u-index over uq); result R(q over uq, p over vp) = h^T.
  MatrixXcd r = h.transpose();
  SampledFunction2D res(PhaseGrid{uq, vp}, std::move(r));
  res.warnings = F.warnings;
  if (decay_warned) {
    res.warnings.push_back("symplectic_fourier: input does not decay at grid edges");
  }
  return res;
}

SampledFunction2D convolve_2d(const SampledFunction2D& K,
                              const SampledFunction2D& f) {
  if (!K.grid.q_axis.same_as(f.grid.q_axis) || !K.grid.p_axis.same_as(f.grid.p_axis)) {
    throw std::invalid_argument("convolve_2d: grid mismatch");
  }
  const LineGrid dq = f.grid.q_axis.dual();
  const LineGrid dp = f.grid.p_axis.dual();

  auto forward2 = [&](const MatrixXcd& m) {
    MatrixXcd a(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      SampledFunction1D row(f.grid.p_axis, m.row(i).transpose());
      a.row(i) = fourier_to_grid(row, dp, Direction::forward, 0.0).values.transpose();
    }
    MatrixXcd b(m.rows(), m.cols());
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      SampledFunction1D col(f.grid.q_axis, a.col(j));
      b.col(j) = fourier_to_grid(col, dq, Direction::forward, 0.0).values;
    }
    return b;
  };

  MatrixXcd prod = kTwoPi * forward2(K.values).cwiseProduct(forward2(f.values));

  MatrixXcd a(prod.rows(), prod.cols());
  for (Eigen::Index j = 0; j < prod.cols(); ++j) {
    SampledFunction1D col(dq, prod.col(j));
    a.col(j) = fourier_to_grid(col, f.grid.q_axis, Direction::inverse, 0.0).values;
  }
  MatrixXcd b(prod.rows(), prod.cols());
  for (Eigen::Index i = 0; i < prod.rows(); ++i) {
    SampledFunction1D row(dp, a.row(i).transpose());
    b.row(i) = fourier_to_grid(row, f.grid.p_axis, Direction::inverse, 0.0).values.transpose();
  }
  return SampledFunction2D(f.grid, std::move(b));
}

SampledFunction1D spectral_derivative(const SampledFunction1D& f, int order) {
  if (order < 0) throw std::invalid_argument("spectral_derivative: negative order");
  const LineGrid dual = f.grid.dual();
  SampledFunction1D F = fourier_to_grid(f, dual, Direction::forward, 0.0);
  for (int k = 0; k < dual.n(); ++k) {
    F.values[k] *= std::pow(complexd(0.0, dual.point(k)), order);
  }
  SampledFunction1D res = fourier_to_grid(F, f.grid, Direction::inverse, 0.0);
  res.warnings = f.warnings;
  return res;
}

VectorXcd upsample_periodic_2x(const VectorXcd& v) {
  const int n = static_cast<int>(v.size());
  VectorXcd spec = raw_dft(v, -1);
  VectorXcd big = VectorXcd::Zero(2 * n);
  for (int k = 0; k < n / 2; ++k) big[k] = spec[k];
  big[n / 2] = 0.5 * spec[n / 2];
  big[2 * n - n / 2] = 0.5 * spec[n / 2];
  for (int k = n / 2 + 1; k < n; ++k) big[n + k] = spec[k];
  return raw_dft(big, +1) / static_cast<double>(n);
}

SampledFunction1D translate(const SampledFunction1D& f, double shift) {
  const LineGrid dual = f.grid.dual();
  SampledFunction1D F = fourier_to_grid(f, dual, Direction::forward, 0.0);
  for (int k = 0; k < dual.n(); ++k) {
    F.values[k] *= std::polar(1.0, -shift * dual.point(k));
  }
  SampledFunction1D res = fourier_to_grid(F, f.grid, Direction::inverse, 0.0);
  res.warnings = f.warnings;
  return res;
}

}  // namespace whq
