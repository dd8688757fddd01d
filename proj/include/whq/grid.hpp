#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace whq {

using complexd = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kSqrtTwoPi = 2.50662827463100050242;
inline constexpr double kSqrtPi = 1.77245385090551602730;

/// Uniform grid x_j = x_min + j*dx, j = 0..n-1, with dx = (x_max - x_min)/n.
/// n is required to be a power of two (>= 8). The dual (frequency) grid is
/// zero-centred with spacing dp = 2*pi/(n*dx).
class LineGrid {
 public:
  LineGrid(double x_min, double x_max, int n);

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  int n() const { return n_; }
  double dx() const { return dx_; }
  double length() const { return x_max_ - x_min_; }

  double point(int j) const { return x_min_ + j * dx_; }
  VectorXd points() const;

  /// Spacing of the dual grid, 2*pi/(n*dx).
  double dual_spacing() const { return kTwoPi / (n_ * dx_); }

  /// Zero-centred dual grid: p_k = (k - n/2)*dp.
  LineGrid dual() const;

  /// True when the grid is centred on the origin (x_min = -x_max).
  bool is_symmetric() const;

  /// Index of the grid point closest to x (clamped to the grid).
  int nearest_index(double x) const;

  bool same_as(const LineGrid& other, double tol = 1e-12) const;

 private:
  double x_min_;
  double x_max_;
  int n_;
  double dx_;
};

LineGrid make_line_grid(double x_min, double x_max, int n);

/// Convenience constructor for the zero-centred grids used by the
/// phase-space machinery.
LineGrid symmetric_grid(double half_width, int n);

struct PhaseGrid {
  LineGrid q_axis;
  LineGrid p_axis;
};

/// Phase grid with q_axis = grid and p_axis = its dual; this is the layout
/// the quantization kernels assume.
PhaseGrid standard_phase_grid(const LineGrid& grid);

/// Complex-valued samples on a LineGrid. Results of transforms carry
/// warnings (e.g. wraparound risk) instead of failing hard.
struct SampledFunction1D {
  LineGrid grid;
  VectorXcd values;
  std::vector<std::string> warnings;

  SampledFunction1D(LineGrid g, VectorXcd v);

  int n() const { return grid.n(); }
  double max_abs() const;

  /// Trapezoidal (= rectangle, periodic convention) quadrature of values.
  complexd integral() const;
  /// Quadrature L2 norm, sqrt(dx * sum |v|^2).
  double norm() const;
};

/// Quadrature inner product <f, g> = dx * sum conj(f_j) g_j (same grid).
complexd inner(const SampledFunction1D& f, const SampledFunction1D& g);

/// Complex-valued samples on a PhaseGrid; values(i, j) = F(q_i, p_j).
struct SampledFunction2D {
  PhaseGrid grid;
  MatrixXcd values;
  std::vector<std::string> warnings;

  SampledFunction2D(PhaseGrid g, MatrixXcd v);

  int nq() const { return grid.q_axis.n(); }
  int np() const { return grid.p_axis.n(); }
  double max_abs() const;

  /// dq*dp * sum of values.
  complexd integral() const;
};

SampledFunction1D sample_function(const LineGrid& grid,
                                  const std::function<complexd(double)>& f);
SampledFunction2D sample_function(const PhaseGrid& grid,
                                  const std::function<complexd(double, double)>& f);

/// Normalized gaussian wave packet exp(ikx) * exp(-(x-c)^2/(2 w^2)),
/// quadrature norm 1. Handy as a test/probe state.
SampledFunction1D gaussian_state(const LineGrid& grid, double center,
                                 double width, double momentum = 0.0);

/// Fiducial-state presets.
SampledFunction1D psi_gaussian_ground(const LineGrid& grid);
SampledFunction1D psi_hermite_1(const LineGrid& grid);

}  // namespace whq
