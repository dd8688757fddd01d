#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "whq/mollifiers.hpp"

using namespace whq;

namespace {

// composite Simpson oracle for smooth integrands
double simpson(double a, double b, int n, const std::function<double(double)>& f) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace

TEST_CASE("IntervalSet contract") {
  CHECK_THROWS_AS(IntervalSet(2.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(IntervalSet(3.0, 1.0), std::invalid_argument);
  IntervalSet e(0.0, 2.0);
  CHECK(e.width() == 2.0);
  CHECK(e.contains(1.0));
  CHECK(!e.contains(0.0));  // open interval
}

TEST_CASE("bump_mollifier") {
  LineGrid g = make_line_grid(-10.0, 10.0, 1024);
  SampledFunction1D omega = bump_mollifier(g);

  SUBCASE("unit grid mass") {
    CHECK(std::abs(omega.integral().real() - 1.0) < 1e-12);
  }

  SUBCASE("compact support") {
    const int j_out_lo = g.nearest_index(-1.0 - g.dx());
    const int j_out_hi = g.nearest_index(1.0 + g.dx());
    CHECK(omega.values[j_out_lo] == complexd(0.0, 0.0));
    CHECK(omega.values[j_out_hi] == complexd(0.0, 0.0));
  }

  SUBCASE("value at the origin is c * e^{-1} with c fixed by the quadrature") {
    double raw_mass = 0.0;
    for (int j = 0; j < g.n(); ++j) {
      const double x = g.point(j);
      if (std::abs(x) < 1.0) raw_mass += std::exp(-1.0 / (1.0 - x * x));
    }
    raw_mass *= g.dx();
    const double c = 1.0 / raw_mass;
    const int j0 = g.nearest_index(0.0);
    CHECK(omega.values[j0].real() == doctest::Approx(c * std::exp(-1.0)).epsilon(1e-12));
  }

  SUBCASE("grid too small is an error") {
    CHECK_THROWS_AS(bump_mollifier(make_line_grid(0.5, 3.0, 64)), std::invalid_argument);
  }
}

TEST_CASE("scaled_mollifier") {
  LineGrid g = make_line_grid(-10.0, 10.0, 1024);
  SampledFunction1D omega = bump_mollifier(g);

  SUBCASE("sigma = 1 is the identity up to resampling") {
    SampledFunction1D s = scaled_mollifier(omega, 1.0);
    CHECK((s.values - omega.values).cwiseAbs().maxCoeff() < 1e-12);
  }

  SUBCASE("unit mass for shrunk copies") {
    for (double sigma : {0.5, 0.1}) {
      SampledFunction1D s = scaled_mollifier(omega, sigma);
      CHECK(std::abs(s.integral().real() - 1.0) < 1e-12);
    }
  }

  SUBCASE("support radius scales to sigma within one cell") {
    SampledFunction1D s = scaled_mollifier(omega, 0.5);
    for (int j = 0; j < g.n(); ++j) {
      if (std::abs(s.values[j]) > 0.0) {
        CHECK(std::abs(g.point(j)) < 0.5 + g.dx());
      }
    }
  }

  SUBCASE("under-resolved sigma is an error") {
    CHECK_THROWS_AS(scaled_mollifier(omega, 3.0 * g.dx()), std::invalid_argument);
  }
}

TEST_CASE("smooth_indicator") {
  LineGrid g = make_line_grid(-6.0, 6.0, 1024);
  IntervalSet e(0.0, 2.0);

  SUBCASE("sigma = 0 reproduces the sampled characteristic function") {
    SmoothIndicator u = smooth_indicator(e, 0.0, g);
    for (int j = 0; j < g.n(); ++j) {
      const double expected = e.contains(g.point(j)) ? 1.0 : 0.0;
      CHECK(u.values.values[j].real() == expected);
    }
  }

  SUBCASE("deep interior saturates to one") {
    SmoothIndicator u = smooth_indicator(e, 0.2, g);
    const int j1 = g.nearest_index(1.0);
    CHECK(std::abs(u.values.values[j1].real() - 1.0) < 1e-12);
  }

  SUBCASE("sigma sweep converges uniformly away from the edges") {
    for (double sigma : {0.4, 0.2, 0.1}) {
      SmoothIndicator u = smooth_indicator(e, sigma, g);
      double worst = 0.0;
      for (int j = 0; j < g.n(); ++j) {
        const double x = g.point(j);
        const double dist = std::min(std::abs(x - e.alpha), std::abs(x - e.beta));
        if (dist <= 2 * sigma) continue;
        const double chi = e.contains(x) ? 1.0 : 0.0;
        worst = std::max(worst, std::abs(u.values.values[j].real() - chi));
      }
      CHECK(worst <= 1e-12);
    }
  }

  SUBCASE("bounds invariant") {
    for (double sigma : {0.0, 0.4, 0.2}) {
      SmoothIndicator u = smooth_indicator(e, sigma, g);
      double lo = 1e300, hi = -1e300;
      for (int j = 0; j < g.n(); ++j) {
        lo = std::min(lo, u.values.values[j].real());
        hi = std::max(hi, u.values.values[j].real());
      }
      CHECK(lo >= 0.0);
      CHECK(hi <= 1.0 + 1e-12);
    }
  }

  SUBCASE("saturation on [alpha+sigma, beta-sigma]") {
    for (double sigma : {0.4, 0.2, 0.1}) {
      SmoothIndicator u = smooth_indicator(e, sigma, g);
      for (int j = 0; j < g.n(); ++j) {
        const double x = g.point(j);
        if (x >= e.alpha + sigma && x <= e.beta - sigma) {
          CHECK(std::abs(u.values.values[j].real() - 1.0) <= 1e-12);
        }
      }
    }
  }

  SUBCASE("grid-quadrature mass equals the width once the rolloff is resolved") {
    // the rolloff needs ~50 cells per sigma for the trapezoid sum to reach 1e-10
    LineGrid fine = make_line_grid(-2.0, 2.0, 1024);
    IntervalSet e2(-1.0, 1.0);
    for (double sigma : {0.4, 0.2}) {
      SmoothIndicator u = smooth_indicator(e2, sigma, fine);
      CHECK(std::abs(u.values.integral().real() - e2.width()) < 1e-10);
    }
    // moderate resolution keeps a few digits less
    SmoothIndicator coarse = smooth_indicator(e, 0.2, g);
    CHECK(std::abs(coarse.values.integral().real() - e.width()) < 1e-7);
  }

  SUBCASE("interval exiting the grid is an error") {
    CHECK_THROWS_AS(smooth_indicator(IntervalSet(5.0, 7.0), 0.2, g), std::invalid_argument);
  }
}

TEST_CASE("gaussian_window_closed_form") {
  LineGrid g = make_line_grid(-16.0, 16.0, 512);
  IntervalSet e(0.0, 2.0);
  SampledFunction1D a = gaussian_window_closed_form(e, g);

  SUBCASE("maximum at the midpoint, value sqrt(pi)*erf(1)") {
    int argmax = 0;
    double best = -1.0;
    for (int j = 0; j < g.n(); ++j) {
      if (a.values[j].real() > best) {
        best = a.values[j].real();
        argmax = j;
      }
    }
    CHECK(g.point(argmax) == doctest::Approx(1.0).epsilon(1e-12));
    // oracle: Simpson quadrature of \int_{-1}^{1} e^{-t^2} dt
    const double oracle = simpson(-1.0, 1.0, 4000, [](double t) { return std::exp(-t * t); });
    CHECK(best == doctest::Approx(oracle).epsilon(1e-10));
    CHECK(best == doctest::Approx(kSqrtPi * std::erf(1.0)).epsilon(1e-12));
    CHECK(best <= e.width());
  }

  SUBCASE("bounded by beta - alpha everywhere") {
    for (int j = 0; j < g.n(); ++j) CHECK(a.values[j].real() <= e.width());
  }

  SUBCASE("strictly positive far outside") {
    CHECK(gaussian_window_value(e, e.beta + 10.0) > 0.0);
    CHECK(gaussian_window_value(e, e.alpha - 12.0) > 0.0);
  }

  SUBCASE("derivative matches -e^{-(x-beta)^2} + e^{-(x-alpha)^2}") {
    const double h = 1e-5;
    double worst = 0.0;
    for (double x : {-1.0, 0.0, 0.5, 1.0, 1.7, 2.0, 3.5}) {
      const double num =
          (gaussian_window_value(e, x + h) - gaussian_window_value(e, x - h)) / (2 * h);
      const double exact = -std::exp(-(x - e.beta) * (x - e.beta)) +
                           std::exp(-(x - e.alpha) * (x - e.alpha));
      worst = std::max(worst, std::abs(num - exact));
    }
    CHECK(worst < 1e-6);
  }

  SUBCASE("tails stay representable far out") {
    CHECK(gaussian_window_value(e, 24.0) > 0.0);
    CHECK(std::isfinite(std::log(gaussian_window_value(e, 24.0))));
  }
}

TEST_CASE("indicator_convolve ties the closed form to the convolution") {
  LineGrid g = make_line_grid(-16.0, 16.0, 512);
  IntervalSet e(0.0, 2.0);
  SampledFunction1D gamma = sample_function(
      g, [](double x) { return complexd(std::exp(-x * x) / kSqrtPi, 0.0); });

  // chi_E * (e^{-x^2}/sqrt(pi)) = (1/sqrt(pi)) * closed-form window
  SampledFunction1D conv = indicator_convolve(e, gamma);
  SampledFunction1D closed = gaussian_window_closed_form(e, g);
  double worst = 0.0;
  for (int j = 0; j < g.n(); ++j) {
    worst = std::max(worst,
                     std::abs(conv.values[j].real() - closed.values[j].real() / kSqrtPi));
  }
  CHECK(worst < 1e-8);

  // pointwise quadrature oracle at a few grid points
  for (double x_req : {0.3, 1.0, 2.5}) {
    const int j = g.nearest_index(x_req);
    const double x = g.point(j);
    const double oracle = simpson(e.alpha, e.beta, 2000, [&](double y) {
      return std::exp(-(x - y) * (x - y)) / kSqrtPi;
    });
    CHECK(std::abs(conv.values[j].real() - oracle) < 1e-9);
  }
}

TEST_CASE("smooth_indicator_convolve against direct quadrature") {
  LineGrid g = make_line_grid(-8.0, 8.0, 512);
  IntervalSet e(-1.0, 1.5);
  const double sigma = 0.25;
  SmoothIndicator u = smooth_indicator(e, sigma, g);
  SampledFunction1D gamma = sample_function(
      g, [](double x) { return complexd(std::exp(-x * x) / kSqrtPi, 0.0); });
  SampledFunction1D conv = smooth_indicator_convolve(u, gamma);

  for (double x_req : {-1.2, 0.0, 1.4, 2.2}) {
    // oracle: \int u(y) gamma(x - y) dy with u from the CDF table
    const int j = g.nearest_index(x_req);
    const double x = g.point(j);
    const double oracle = simpson(e.alpha - sigma, e.beta + sigma, 4000, [&](double y) {
      const double uy = bump_cdf((y - e.alpha) / sigma) - bump_cdf((y - e.beta) / sigma);
      return uy * std::exp(-(x - y) * (x - y)) / kSqrtPi;
    });
    CHECK(std::abs(conv.values[j].real() - oracle) < 1e-9);
  }
}
