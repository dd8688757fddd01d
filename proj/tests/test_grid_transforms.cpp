#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "whq/grid.hpp"
#include "whq/transforms.hpp"

using namespace whq;

namespace {

SampledFunction1D gaussian_exp(const LineGrid& g, double a) {
  // exp(-a x^2), unnormalized
  return sample_function(g, [a](double x) { return complexd(std::exp(-a * x * x), 0.0); });
}

double max_abs_diff(const VectorXcd& u, const VectorXcd& v) {
  return (u - v).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("make_line_grid basic contract") {
  LineGrid g = make_line_grid(-10.0, 10.0, 256);
  CHECK(g.dx() == doctest::Approx(20.0 / 256).epsilon(1e-15));
  CHECK(g.point(0) == doctest::Approx(-10.0));
  CHECK(g.n() == 256);
  CHECK(g.dual_spacing() == doctest::Approx(kTwoPi / (256 * g.dx())));

  CHECK_THROWS_AS(make_line_grid(-10.0, 10.0, 7), std::invalid_argument);
  CHECK_THROWS_AS(make_line_grid(0.0, 0.0, 16), std::invalid_argument);
  CHECK_THROWS_AS(make_line_grid(-1.0, 1.0, 4), std::invalid_argument);
}

TEST_CASE("dual grid is zero-centred with reciprocal spacing") {
  LineGrid g = make_line_grid(-10.0, 10.0, 128);
  LineGrid d = g.dual();
  CHECK(d.is_symmetric());
  CHECK(d.dx() == doctest::Approx(kTwoPi / (128 * g.dx())));
  CHECK(d.point(64) == doctest::Approx(0.0));
}

TEST_CASE("gaussian is its own transform in this convention") {
  LineGrid g = make_line_grid(-20.0, 20.0, 1024);
  SampledFunction1D f = gaussian_exp(g, 0.5);  // e^{-x^2/2}
  SampledFunction1D F = fourier_1d(f, Direction::forward);
  double worst = 0.0;
  for (int k = 0; k < F.n(); ++k) {
    const double p = F.grid.point(k);
    worst = std::max(worst, std::abs(F.values[k] - std::exp(-0.5 * p * p)));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("transform of zero is zero") {
  LineGrid g = make_line_grid(-10.0, 10.0, 64);
  SampledFunction1D f(g, VectorXcd::Zero(64));
  SampledFunction1D F = fourier_1d(f, Direction::forward);
  CHECK(F.max_abs() == 0.0);
}

TEST_CASE("forward-inverse round trip") {
  LineGrid g = make_line_grid(-20.0, 20.0, 512);
  SampledFunction1D f = gaussian_exp(g, 1.0);
  SampledFunction1D back = fourier_1d(fourier_1d(f, Direction::forward), Direction::inverse);
  CHECK(max_abs_diff(back.values, f.values) < 1e-12);
}

TEST_CASE("round trip on an offset (asymmetric) grid through fourier_to_grid") {
  LineGrid g = make_line_grid(-3.0, 17.0, 256);
  SampledFunction1D f = sample_function(
      g, [](double x) { return complexd(std::exp(-(x - 7.0) * (x - 7.0)), 0.0); });
  LineGrid dual = g.dual();
  SampledFunction1D F = fourier_to_grid(f, dual, Direction::forward);
  SampledFunction1D back = fourier_to_grid(F, g, Direction::inverse);
  CHECK(max_abs_diff(back.values, f.values) < 1e-12);
}

TEST_CASE("Parseval identity") {
  LineGrid g = make_line_grid(-15.0, 15.0, 512);
  SampledFunction1D f = sample_function(g, [](double x) {
    return complexd(std::exp(-x * x / 3.0) * std::cos(2 * x), std::exp(-x * x) * x);
  });
  SampledFunction1D F = fourier_1d(f, Direction::forward);
  CHECK(F.norm() == doctest::Approx(f.norm()).epsilon(1e-10));
}

TEST_CASE("non-decaying input gets a warning flag, not an error") {
  LineGrid g = make_line_grid(-10.0, 10.0, 64);
  SampledFunction1D f(g, VectorXcd::Ones(64));
  SampledFunction1D F = fourier_1d(f, Direction::forward);
  CHECK(!F.warnings.empty());
  SampledFunction1D good = gaussian_exp(g, 1.0);
  CHECK(fourier_1d(good, Direction::forward).warnings.empty());
}

TEST_CASE("partial_fourier_p on separable fields") {
  LineGrid gq = make_line_grid(-8.0, 8.0, 64);
  LineGrid gp = make_line_grid(-12.0, 12.0, 128);
  PhaseGrid pg{gq, gp};

  SUBCASE("separable gaussian transforms row-wise") {
    SampledFunction2D F = sample_function(pg, [](double q, double p) {
      return complexd(std::sin(q) * std::exp(-0.5 * p * p), 0.0);
    });
    SampledFunction2D T = partial_fourier_p(F);
    double worst = 0.0;
    for (int i = 0; i < T.nq(); ++i) {
      for (int j = 0; j < T.np(); ++j) {
        const double y = T.grid.p_axis.point(j);
        const double expect = std::sin(gq.point(i)) * std::exp(-0.5 * y * y);
        worst = std::max(worst, std::abs(T.values(i, j) - expect));
      }
    }
    CHECK(worst < 1e-10);
  }

  SUBCASE("zero maps to zero") {
    SampledFunction2D F(pg, MatrixXcd::Zero(64, 128));
    CHECK(partial_fourier_p(F).max_abs() == 0.0);
  }
}

TEST_CASE("partial_fourier_p of the coherent-state apodization") {
  // F(q,p) = e^{-(q^2+p^2)/4} -> e^{-q^2/4} * sqrt(2) * e^{-y^2};
  // oracle: direct quadrature of the defining integral per row.
  LineGrid g = make_line_grid(-16.0, 16.0, 256);
  PhaseGrid pg{g, g.dual()};
  SampledFunction2D F = sample_function(pg, [](double q, double p) {
    return complexd(std::exp(-0.25 * (q * q + p * p)), 0.0);
  });
  SampledFunction2D T = partial_fourier_p(F);

  double worst_analytic = 0.0;
  double worst_oracle = 0.0;
  const int iq = g.nearest_index(1.0);
  for (int j = 0; j < T.np(); ++j) {
    const double y = T.grid.p_axis.point(j);
    const double q = g.point(iq);
    const double analytic = std::exp(-0.25 * q * q) * std::sqrt(2.0) * std::exp(-y * y);
    worst_analytic = std::max(worst_analytic, std::abs(T.values(iq, j) - analytic));
    complexd oracle(0, 0);  // rectangle quadrature of the defining integral
    for (int l = 0; l < pg.p_axis.n(); ++l) {
      const double p = pg.p_axis.point(l);
      oracle += std::exp(-0.25 * (q * q + p * p)) *
                std::polar(pg.p_axis.dx() / kSqrtTwoPi, -y * p);
    }
    worst_oracle = std::max(worst_oracle, std::abs(T.values(iq, j) - oracle));
  }
  CHECK(worst_analytic < 1e-9);
  CHECK(worst_oracle < 1e-12);
}

TEST_CASE("symplectic fourier transform") {
  LineGrid g = make_line_grid(-12.0, 12.0, 128);
  PhaseGrid pg{g, g.dual()};
  SampledFunction2D F = sample_function(pg, [](double q, double p) {
    return complexd(std::exp(-0.5 * (q * q + p * p)), 0.0);
  });

  SUBCASE("standard gaussian is a fixed point") {
    SampledFunction2D T = symplectic_fourier(F);
    double worst = 0.0;
    for (int i = 0; i < T.nq(); ++i) {
      for (int j = 0; j < T.np(); ++j) {
        const double q = T.grid.q_axis.point(i);
        const double p = T.grid.p_axis.point(j);
        worst = std::max(worst,
                         std::abs(T.values(i, j) - std::exp(-0.5 * (q * q + p * p))));
      }
    }
    CHECK(worst < 1e-9);
  }

  SUBCASE("2-D quadrature oracle at sample points") {
    SampledFunction2D T = symplectic_fourier(F);
    for (int iq : {64, 67}) {
      for (int jp : {60, 70}) {
        const double q = T.grid.q_axis.point(iq);
        const double p = T.grid.p_axis.point(jp);
        complexd oracle(0, 0);
        for (int a = 0; a < pg.q_axis.n(); ++a) {
          for (int b = 0; b < pg.p_axis.n(); ++b) {
            const double qp = pg.q_axis.point(a);
            const double pp = pg.p_axis.point(b);
            oracle += std::polar(1.0, -(q * pp - qp * p)) *
                      std::exp(-0.5 * (qp * qp + pp * pp));
          }
        }
        oracle *= pg.q_axis.dx() * pg.p_axis.dx() / kTwoPi;
        CHECK(std::abs(T.values(iq, jp) - oracle) < 1e-10);
      }
    }
  }

  SUBCASE("involution") {
    SampledFunction2D TT = symplectic_fourier(symplectic_fourier(F));
    CHECK((TT.values - F.values).cwiseAbs().maxCoeff() < 1e-10);
  }

  SUBCASE("dual flips the arguments") {
    SampledFunction2D odd = sample_function(pg, [](double q, double p) {
      return complexd(q * std::exp(-0.5 * (q * q + p * p)), 0.0);
    });
    SampledFunction2D T = symplectic_fourier(odd, false);
    SampledFunction2D D = symplectic_fourier(odd, true);
    const int nq = T.values.rows(), np = T.values.cols();
    double worst = 0.0;
    for (int i = 1; i < nq; ++i) {
      for (int j = 1; j < np; ++j) {
        worst = std::max(worst, std::abs(D.values(i, j) - T.values(nq - i, np - j)));
      }
    }
    CHECK(worst < 1e-10);
  }

  SUBCASE("zero maps to zero") {
    SampledFunction2D Z(pg, MatrixXcd::Zero(128, 128));
    CHECK(symplectic_fourier(Z).max_abs() == 0.0);
  }
}

TEST_CASE("convolve_1d") {
  LineGrid g = make_line_grid(-16.0, 16.0, 512);

  SUBCASE("gaussian density convolution adds variances") {
    auto density = [&](double s2) {
      return sample_function(g, [s2](double x) {
        return complexd(std::exp(-0.5 * x * x / s2) / std::sqrt(kTwoPi * s2), 0.0);
      });
    };
    SampledFunction1D c = convolve_1d(density(1.0), density(1.0));
    double worst = 0.0;
    for (int j = 0; j < g.n(); ++j) {
      const double x = g.point(j);
      worst = std::max(worst,
                       std::abs(c.values[j] - std::exp(-0.25 * x * x) / std::sqrt(2 * kTwoPi)));
    }
    CHECK(worst < 1e-10);
  }

  SUBCASE("narrow normalized spike acts as an approximate identity") {
    SampledFunction1D f = gaussian_exp(g, 0.3);
    const double w = 4 * g.dx();
    SampledFunction1D spike = sample_function(g, [w](double x) {
      return complexd(std::exp(-0.5 * x * x / (w * w)) / (w * std::sqrt(kTwoPi)), 0.0);
    });
    SampledFunction1D c = convolve_1d(f, spike);
    // error bounded by the spike width scale
    CHECK(max_abs_diff(c.values, f.values) < w);
    CHECK(max_abs_diff(c.values, f.values) > 0.0);
  }

  SUBCASE("commutative and linear") {
    SampledFunction1D f = gaussian_exp(g, 0.4);
    SampledFunction1D h = sample_function(
        g, [](double x) { return complexd(std::exp(-0.7 * x * x) * x, 0.0); });
    SampledFunction1D fg = convolve_1d(f, h);
    SampledFunction1D gf = convolve_1d(h, f);
    CHECK(max_abs_diff(fg.values, gf.values) < 1e-12);

    SampledFunction1D h2(g, 2.0 * h.values);
    SampledFunction1D f_h2 = convolve_1d(f, h2);
    CHECK(max_abs_diff(f_h2.values, 2.0 * fg.values) < 1e-12);
  }

  SUBCASE("grid mismatch is an error") {
    LineGrid other = make_line_grid(-8.0, 8.0, 512);
    CHECK_THROWS_AS(convolve_1d(gaussian_exp(g, 1.0), gaussian_exp(other, 1.0)),
                    std::invalid_argument);
  }
}

TEST_CASE("spectral derivative and translation") {
  LineGrid g = make_line_grid(-14.0, 14.0, 256);
  SampledFunction1D f = gaussian_exp(g, 0.5);

  SampledFunction1D d = spectral_derivative(f, 1);
  double worst = 0.0;
  for (int j = 0; j < g.n(); ++j) {
    const double x = g.point(j);
    worst = std::max(worst, std::abs(d.values[j] - (-x) * std::exp(-0.5 * x * x)));
  }
  CHECK(worst < 1e-9);

  SampledFunction1D t = translate(f, 1.25);
  worst = 0.0;
  for (int j = 0; j < g.n(); ++j) {
    const double x = g.point(j);
    worst = std::max(worst, std::abs(t.values[j] - std::exp(-0.5 * (x - 1.25) * (x - 1.25))));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("upsample_periodic_2x reproduces band-limited midpoints") {
  LineGrid g = make_line_grid(-10.0, 10.0, 128);
  SampledFunction1D f = gaussian_exp(g, 1.0);
  VectorXcd fine = upsample_periodic_2x(f.values);
  REQUIRE(fine.size() == 256);
  double worst = 0.0;
  for (int j = 0; j < 128; ++j) {
    worst = std::max(worst, std::abs(fine[2 * j] - f.values[j]));
  }
  CHECK(worst < 1e-13);
  for (int j = 0; j < 127; ++j) {
    const double xm = g.point(j) + 0.5 * g.dx();
    worst = std::max(worst, std::abs(fine[2 * j + 1] - std::exp(-xm * xm)));
  }
  CHECK(worst < 1e-10);
}
