#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "whq/apodization.hpp"
#include "whq/mollifiers.hpp"

using namespace whq;

namespace {

const LineGrid g_grid = symmetric_grid(16.0, 256);
const PhaseGrid g_phase = standard_phase_grid(g_grid);

// direct overlap-integral oracle for Pi(q,p) = <psi| U(-q,-p) psi> with an
// analytic psi, independent of the transform machinery
complexd pi_overlap_oracle(const std::function<double(double)>& psi, double q, double p) {
  const int n = 20000;
  const double lo = -18.0, hi = 18.0;
  const double h = (hi - lo) / n;
  complexd acc(0, 0);
  for (int i = 0; i <= n; ++i) {
    const double x = lo + i * h;
    const double w = (i == 0 || i == n) ? 0.5 : 1.0;
    acc += w * psi(x) * psi(x + q) * std::polar(1.0, -p * x);
  }
  return acc * h * std::polar(1.0, -0.5 * q * p);
}

double psi_gauss(double x) { return std::pow(kPi, -0.25) * std::exp(-0.5 * x * x); }

}  // namespace

TEST_CASE("weyl_wigner_apodization") {
  Apodization apod = weyl_wigner_apodization(g_phase);
  CHECK(apod.is_weyl_wigner());
  CHECK(apod.pi.values.cwiseAbs().minCoeff() == 1.0);
  CHECK(apod.pi.values.cwiseAbs().maxCoeff() == 1.0);

  SUBCASE("gamma is a unit-mass spike") {
    CHECK(apod.gamma_delta_like);
    CHECK(std::abs(apod.gamma.integral().real() - 1.0) < 1e-12);
    int nonzero = 0;
    for (int j = 0; j < apod.gamma.n(); ++j) {
      if (std::abs(apod.gamma.values[j]) > 0) ++nonzero;
    }
    CHECK(nonzero == 1);
  }

  SUBCASE("assumption 1 is flagged distributional, not boolean-true") {
    CHECK(apod.assumption_report.distributional);
    CHECK(apod.assumption_report.a1_distributional);
    CHECK(!apod.assumption_report.a1_pass);
  }
}

TEST_CASE("pure_state_apodization with the gaussian fiducial") {
  SampledFunction1D psi = psi_gaussian_ground(g_grid);
  Apodization apod = pure_state_apodization(psi, g_phase);

  SUBCASE("Pi matches e^{-(q^2+p^2)/4} and the overlap oracle") {
    double worst_analytic = 0.0;
    for (int i = 0; i < apod.pi.nq(); ++i) {
      for (int j = 0; j < apod.pi.np(); ++j) {
        const double q = g_phase.q_axis.point(i);
        const double p = g_phase.p_axis.point(j);
        worst_analytic = std::max(
            worst_analytic,
            std::abs(apod.pi.values(i, j) - std::exp(-0.25 * (q * q + p * p))));
      }
    }
    CHECK(worst_analytic < 1e-8);

    // spot-check the independent quadrature oracle
    for (int i : {120, 128, 140}) {
      for (int j : {128, 135}) {
        const double q = g_phase.q_axis.point(i);
        const double p = g_phase.p_axis.point(j);
        CHECK(std::abs(apod.pi.values(i, j) - pi_overlap_oracle(psi_gauss, q, p)) < 1e-8);
      }
    }
  }

  SUBCASE("Pi(0,0) = 1 and sup norm 1") {
    const int i0 = g_phase.q_axis.nearest_index(0);
    const int j0 = g_phase.p_axis.nearest_index(0);
    CHECK(std::abs(apod.pi.values(i0, j0) - 1.0) < 1e-10);
    CHECK(apod.pi.max_abs() <= 1.0 + 1e-8);
  }

  SUBCASE("gamma(x) = e^{-x^2}/sqrt(pi), nonnegative, unit mass") {
    double worst = 0.0;
    double min_gamma = 1e300;
    for (int j = 0; j < g_grid.n(); ++j) {
      const double x = g_grid.point(j);
      worst = std::max(worst,
                       std::abs(apod.gamma.values[j] - std::exp(-x * x) / kSqrtPi));
      min_gamma = std::min(min_gamma, apod.gamma.values[j].real());
    }
    CHECK(worst < 1e-8);
    CHECK(min_gamma >= -1e-10);
    CHECK(std::abs(apod.gamma.integral().real() - 1.0) < 1e-8);
  }

  SUBCASE("varpi(p) = |psi_hat|^2 for the gaussian") {
    double worst = 0.0;
    for (int j = 0; j < g_phase.p_axis.n(); ++j) {
      const double p = g_phase.p_axis.point(j);
      worst = std::max(worst,
                       std::abs(apod.varpi.values[j] - std::exp(-p * p) / kSqrtPi));
    }
    CHECK(worst < 1e-8);
  }

  SUBCASE("evenness and conjugation symmetry") {
    CHECK(apod.even_flag);
    const int nq = apod.pi.values.rows(), np = apod.pi.values.cols();
    double worst = 0.0;
    for (int i = 1; i < nq; ++i) {
      for (int j = 1; j < np; ++j) {
        worst = std::max(worst, std::abs(apod.pi.values(i, j) -
                                         std::conj(apod.pi.values(nq - i, np - j))));
      }
    }
    CHECK(worst < 1e-8);
  }

  SUBCASE("all three assumptions pass") {
    CHECK(apod.assumption_report.a1_pass);
    CHECK(apod.assumption_report.a2_pass);
    CHECK(apod.assumption_report.a3_pass);
    CHECK(!apod.assumption_report.distributional);
  }

  SUBCASE("unnormalized psi is rejected with the measured norm") {
    SampledFunction1D bad(g_grid, 2.0 * psi.values);
    CHECK_THROWS_WITH_AS(pure_state_apodization(bad, g_phase),
                         doctest::Contains("not normalized"), std::invalid_argument);
  }
}

TEST_CASE("assumption 1 fails for the first excited hermite state") {
  SampledFunction1D psi = psi_hermite_1(g_grid);
  Apodization apod = pure_state_apodization(psi, g_phase);
  CHECK(!apod.assumption_report.a1_pass);
  CHECK(apod.assumption_report.a1_min < -0.5);  // 2*pi*W(0,0) = -2 for hermite_1
  CHECK(apod.assumption_report.a3_pass);        // |psi(-y)|^2 >= 0 always
}

TEST_CASE("wigner_function") {
  SUBCASE("gaussian ground state: (1/pi) e^{-q^2-p^2}, nonnegative, unit mass") {
    SampledFunction1D psi = psi_gaussian_ground(g_grid);
    SampledFunction2D w = wigner_function(psi, g_phase);
    double worst = 0.0;
    double min_val = 1e300;
    for (int i = 0; i < w.nq(); ++i) {
      for (int j = 0; j < w.np(); ++j) {
        const double q = g_phase.q_axis.point(i);
        const double p = g_phase.p_axis.point(j);
        worst = std::max(worst, std::abs(w.values(i, j) -
                                         std::exp(-q * q - p * p) / kPi));
        min_val = std::min(min_val, w.values(i, j).real());
      }
    }
    CHECK(worst < 1e-9);
    CHECK(min_val >= -1e-9);
    CHECK(std::abs(w.integral().real() - 1.0) < 1e-6);
  }

  SUBCASE("hermite_1 is negative at the origin") {
    SampledFunction1D psi = psi_hermite_1(g_grid);
    SampledFunction2D w = wigner_function(psi, g_phase);
    const int i0 = g_phase.q_axis.nearest_index(0);
    const int j0 = g_phase.p_axis.nearest_index(0);
    CHECK(w.values(i0, j0).real() < -0.05);
    // quadrature oracle at the origin: (1/2pi) \int psi(y/2) psi(-y/2) dy
    double oracle = 0.0;
    const int n = 40000;
    const double lo = -20, hi = 20, h = (hi - lo) / n;
    for (int i = 0; i <= n; ++i) {
      const double y = lo + i * h;
      const double w8 = (i == 0 || i == n) ? 0.5 : 1.0;
      const double c = std::sqrt(2.0) * std::pow(kPi, -0.25);
      oracle += w8 * (c * (y / 2) * std::exp(-y * y / 8)) *
                (c * (-y / 2) * std::exp(-y * y / 8));
    }
    oracle *= h / kTwoPi;
    CHECK(w.values(i0, j0).real() == doctest::Approx(oracle).epsilon(1e-6));
    CHECK(oracle == doctest::Approx(-1.0 / kPi).epsilon(1e-9));
    CHECK(std::abs(w.integral().real() - 1.0) < 1e-6);
  }
}

TEST_CASE("displacement operators") {
  LineGrid grid = symmetric_grid(12.0, 128);

  SUBCASE("U(0,0) is the identity exactly") {
    OperatorMatrix u = displacement_matrix(grid, 0.0, 0.0);
    CHECK((u.entries - MatrixXcd::Identity(128, 128)).cwiseAbs().maxCoeff() < 1e-13);
  }

  SUBCASE("unitarity") {
    OperatorMatrix u = displacement_matrix(grid, 1.0, 0.5);
    MatrixXcd should_be_id = u.entries.adjoint() * u.entries;
    CHECK((should_be_id - MatrixXcd::Identity(128, 128)).cwiseAbs().maxCoeff() < 1e-8);
  }

  SUBCASE("composition law with the symplectic phase") {
    // Exactness at the raw matrix level is impossible for off-lattice shifts
    // (basis vectors are full-band and wrap); the law is checked in action on
    // localized states, which is what the operators are for.
    const double q1 = 1.0, p1 = 0.5, q2 = -0.3, p2 = 0.2;
    OperatorMatrix u1 = displacement_matrix(grid, q1, p1);
    OperatorMatrix u2 = displacement_matrix(grid, q2, p2);
    OperatorMatrix u12 = displacement_matrix(grid, q1 + q2, p1 + p2);
    const complexd phase = std::polar(1.0, -0.5 * (q1 * p2 - p1 * q2));
    const MatrixXcd lhs = u1.entries * u2.entries;
    const MatrixXcd rhs = phase * u12.entries;
    for (double center : {-2.0, 0.0, 1.5}) {
      SampledFunction1D probe = gaussian_state(grid, center, 0.8);
      CHECK((lhs * probe.values - rhs * probe.values).cwiseAbs().maxCoeff() < 1e-7);
    }
  }

  SUBCASE("adjoint is the reversed displacement") {
    OperatorMatrix u = displacement_matrix(grid, 0.7, -0.4);
    OperatorMatrix ur = displacement_matrix(grid, -0.7, 0.4);
    CHECK((u.entries.adjoint() - ur.entries).cwiseAbs().maxCoeff() < 1e-10);
  }

  SUBCASE("large shifts carry a wraparound warning") {
    OperatorMatrix u = displacement_matrix(grid, 10.0, 0.0);
    CHECK(!u.warnings.empty());
  }

  SUBCASE("displace_state matches the matrix action") {
    SampledFunction1D psi = psi_gaussian_ground(grid);
    OperatorMatrix u = displacement_matrix(grid, 0.8, -1.1);
    SampledFunction1D direct = displace_state(psi, 0.8, -1.1);
    CHECK((u.entries * psi.values - direct.values).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(direct.norm() == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("validate_assumptions requires the standard grid layout") {
  SampledFunction1D psi = psi_gaussian_ground(g_grid);
  PhaseGrid wrong{g_grid, g_grid};  // p axis not the dual
  CHECK_THROWS_AS(pure_state_apodization(psi, wrong), std::invalid_argument);
}
