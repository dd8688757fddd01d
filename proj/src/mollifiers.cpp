#include "whq/mollifiers.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace whq {

namespace {

double bump_raw(double t) {
  if (std::abs(t) >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - t * t));
}

// 5-point Gauss-Legendre on [a, b].
double gl5(double a, double b, double (*f)(double)) {
  static const std::array<double, 5> xs = {-0.9061798459386640, -0.5384693101056831,
                                           0.0, 0.5384693101056831, 0.9061798459386640};
  static const std::array<double, 5> ws = {0.2369268850561891, 0.4786286704993665,
                                           0.5688888888888889, 0.4786286704993665,
                                           0.2369268850561891};
  const double h = 0.5 * (b - a);
  const double m = 0.5 * (a + b);
  double s = 0.0;
  for (int i = 0; i < 5; ++i) s += ws[i] * f(m + h * xs[i]);
  return h * s;
}

struct BumpTable {
  double c;                    // continuum normalization
  std::vector<double> omega;   // Omega at nodes t_k = -1 + k*h (unnormalized yet)
  std::vector<double> raw;     // bump_raw at the nodes
  double h;
  int m;

  BumpTable() : m(16384) {
    h = 2.0 / m;
    omega.assign(m + 1, 0.0);
    raw.assign(m + 1, 0.0);
    double acc = 0.0;
    for (int k = 0; k < m; ++k) {
      raw[k] = bump_raw(-1.0 + k * h);
      acc += gl5(-1.0 + k * h, -1.0 + (k + 1) * h, &bump_raw);
      omega[k + 1] = acc;
    }
    raw[m] = 0.0;
    c = 1.0 / acc;
    for (auto& v : omega) v *= c;
  }

  // composite Simpson of c * omega(t) cos(kt); the product is smooth and the
  // callers only need |k| up to a few tens (a gaussian factor has already
  // killed the spectrum there).
  double fourier(double k) const {
    double s = 0.0;
    for (int i = 1; i < m; ++i) {
      s += raw[i] * std::cos(k * (-1.0 + i * h)) * (i % 2 ? 4.0 : 2.0);
    }
    return c * s * h / 3.0 / kSqrtTwoPi;
  }

  // Cubic Hermite interpolation of the CDF; the derivative c*bump_raw is exact.
  double cdf(double s) const {
    if (s <= -1.0) return 0.0;
    if (s >= 1.0) return 1.0;
    const double u = (s + 1.0) / h;
    int k = static_cast<int>(u);
    if (k >= m) k = m - 1;
    const double t = u - k;
    const double y0 = omega[k], y1 = omega[k + 1];
    const double d0 = c * bump_raw(-1.0 + k * h) * h;
    const double d1 = c * bump_raw(-1.0 + (k + 1) * h) * h;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * d0 +
           (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * d1;
  }
};

const BumpTable& bump_table() {
  static const BumpTable table;
  return table;
}

}  // namespace

IntervalSet::IntervalSet(double a, double b) : alpha(a), beta(b) {
  if (!(alpha < beta)) {
    throw std::invalid_argument("IntervalSet: need alpha < beta");
  }
}

double bump_constant() { return bump_table().c; }

double bump_cdf(double s) { return bump_table().cdf(s); }

double bump_fourier(double k) { return bump_table().fourier(k); }

SampledFunction1D bump_mollifier(const LineGrid& grid) {
  if (grid.x_min() > -1.0 || grid.x_max() < 1.0) {
    throw std::invalid_argument("bump_mollifier: grid must span at least (-1, 1)");
  }
  VectorXcd v(grid.n());
  double mass = 0.0;
  for (int j = 0; j < grid.n(); ++j) {
    const double w = bump_raw(grid.point(j));
    v[j] = w;
    mass += w;
  }
  mass *= grid.dx();
  v /= mass;  // grid quadrature of the result is exactly 1
  return SampledFunction1D(grid, std::move(v));
}

SampledFunction1D scaled_mollifier(const SampledFunction1D& omega, double sigma) {
  if (!(sigma > 0)) throw std::invalid_argument("scaled_mollifier: sigma must be > 0");
  const LineGrid& grid = omega.grid;
  if (sigma < 4.0 * grid.dx()) {
    throw std::invalid_argument("scaled_mollifier: mollifier under-resolved (sigma < 4*dx)");
  }
  VectorXcd v(grid.n());
  for (int j = 0; j < grid.n(); ++j) {
    const double t = grid.point(j) / sigma;
    if (t < grid.x_min() || t > grid.x_max()) {
      v[j] = 0.0;
      continue;
    }
    // linear interpolation of the given samples at t
    const double u = (t - grid.x_min()) / grid.dx();
    int k = static_cast<int>(u);
    if (k >= grid.n() - 1) k = grid.n() - 2;
    const double frac = u - k;
    v[j] = ((1.0 - frac) * omega.values[k] + frac * omega.values[k + 1]) / sigma;
  }
  double mass = v.sum().real() * grid.dx();
  if (mass <= 0) throw std::invalid_argument("scaled_mollifier: zero mass after scaling");
  v /= mass;
  return SampledFunction1D(grid, std::move(v));
}

SmoothIndicator smooth_indicator(const IntervalSet& set, double sigma,
                                 const LineGrid& grid) {
  if (sigma < 0) throw std::invalid_argument("smooth_indicator: sigma must be >= 0");
  if (set.alpha - sigma < grid.x_min() || set.beta + sigma > grid.x_max()) {
    throw std::invalid_argument("smooth_indicator: [alpha-sigma, beta+sigma] exits the grid");
  }
  VectorXcd v(grid.n());
  if (sigma == 0.0) {
    for (int j = 0; j < grid.n(); ++j) {
      v[j] = set.contains(grid.point(j)) ? 1.0 : 0.0;
    }
  } else {
    for (int j = 0; j < grid.n(); ++j) {
      const double x = grid.point(j);
      v[j] = bump_cdf((x - set.alpha) / sigma) - bump_cdf((x - set.beta) / sigma);
    }
  }
  SmoothIndicator u{set, sigma, SampledFunction1D(grid, std::move(v))};
  if (sigma > 0 && sigma < 4.0 * grid.dx()) {
    u.values.warnings.push_back("smooth_indicator: rolloff narrower than 4*dx, "
                                "grid quadrature against it will be inaccurate");
  }
  return u;
}

double gaussian_window_value(const IntervalSet& set, double x) {
  const double mid = 0.5 * (set.alpha + set.beta);
  // erfc keeps the tails positive; the erf difference cancels beyond |arg|~6.
  if (x <= mid) {
    return 0.5 * kSqrtPi * (std::erfc(set.alpha - x) - std::erfc(set.beta - x));
  }
  return 0.5 * kSqrtPi * (std::erfc(x - set.beta) - std::erfc(x - set.alpha));
}

SampledFunction1D gaussian_window_closed_form(const IntervalSet& set,
                                              const LineGrid& grid) {
  VectorXcd v(grid.n());
  for (int j = 0; j < grid.n(); ++j) {
    v[j] = gaussian_window_value(set, grid.point(j));
  }
  return SampledFunction1D(grid, std::move(v));
}

namespace {

complexd indicator_multiplier(const IntervalSet& set, double p) {
  if (p == 0.0) return set.width();
  // (e^{-ip*alpha} - e^{-ip*beta}) / (ip) without cancellation:
  // e^{-ip*alpha} (1 - e^{-ip*w}), 1 - e^{-iz} = 2 sin^2(z/2) + i sin(z).
  const double w = set.width();
  const double s = std::sin(0.5 * p * w);
  const complexd one_minus = complexd(2.0 * s * s, std::sin(p * w));
  return std::polar(1.0, -p * set.alpha) * one_minus / complexd(0.0, p);
}

SampledFunction1D convolve_by_multiplier(const IntervalSet& set, double sigma,
                                         const SampledFunction1D& g) {
  const LineGrid dual = g.grid.dual();
  SampledFunction1D G = fourier_to_grid(g, dual, Direction::forward, 0.0);
  for (int k = 0; k < dual.n(); ++k) {
    const double p = dual.point(k);
    complexd m = indicator_multiplier(set, p);
    if (sigma > 0.0) m *= kSqrtTwoPi * bump_fourier(sigma * p);
    G.values[k] *= m;
  }
  SampledFunction1D res = fourier_to_grid(G, g.grid, Direction::inverse, 0.0);
  res.warnings = g.warnings;
  return res;
}

}  // namespace

SampledFunction1D indicator_convolve(const IntervalSet& set,
                                     const SampledFunction1D& g) {
  return convolve_by_multiplier(set, 0.0, g);
}

SampledFunction1D smooth_indicator_convolve(const SmoothIndicator& u,
                                            const SampledFunction1D& g) {
  if (!u.values.grid.same_as(g.grid)) {
    throw std::invalid_argument("smooth_indicator_convolve: grid mismatch");
  }
  return convolve_by_multiplier(u.set, u.sigma, g);
}

}  // namespace whq
