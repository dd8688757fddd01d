#include "whq/grid.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace whq {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

void check_finite(const VectorXcd& v, const char* what) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag())) {
      throw std::invalid_argument(std::string(what) +
                                  ": non-finite entry at index " +
                                  std::to_string(i));
    }
  }
}

}  // namespace

LineGrid::LineGrid(double x_min, double x_max, int n)
    : x_min_(x_min), x_max_(x_max), n_(n) {
  if (!(x_max > x_min)) {
    throw std::invalid_argument("LineGrid: degenerate interval, need x_max > x_min");
  }
  if (!is_power_of_two(n) || n < 8) {
    throw std::invalid_argument("LineGrid: n must be a power of two and >= 8, got " +
                                std::to_string(n));
  }
  dx_ = (x_max - x_min) / n;
}

VectorXd LineGrid::points() const {
  VectorXd x(n_);
  for (int j = 0; j < n_; ++j) x[j] = point(j);
  return x;
}

LineGrid LineGrid::dual() const {
  const double dp = dual_spacing();
  const double half = (n_ / 2) * dp;
  return LineGrid(-half, half, n_);
}

bool LineGrid::is_symmetric() const {
  return std::abs(x_min_ + x_max_) <= 1e-12 * (x_max_ - x_min_);
}

int LineGrid::nearest_index(double x) const {
  int j = static_cast<int>(std::lround((x - x_min_) / dx_));
  if (j < 0) j = 0;
  if (j >= n_) j = n_ - 1;
  return j;
}

bool LineGrid::same_as(const LineGrid& other, double tol) const {
  return n_ == other.n_ && std::abs(x_min_ - other.x_min_) <= tol * (1.0 + std::abs(x_min_)) &&
         std::abs(x_max_ - other.x_max_) <= tol * (1.0 + std::abs(x_max_));
}

LineGrid make_line_grid(double x_min, double x_max, int n) {
  return LineGrid(x_min, x_max, n);
}

LineGrid symmetric_grid(double half_width, int n) {
  return LineGrid(-half_width, half_width, n);
}

PhaseGrid standard_phase_grid(const LineGrid& grid) {
  return PhaseGrid{grid, grid.dual()};
}

SampledFunction1D::SampledFunction1D(LineGrid g, VectorXcd v)
    : grid(g), values(std::move(v)) {
  if (values.size() != grid.n()) {
    throw std::invalid_argument("SampledFunction1D: values length != grid.n");
  }
  check_finite(values, "SampledFunction1D");
}

double SampledFunction1D::max_abs() const {
  double m = 0.0;
  for (Eigen::Index i = 0; i < values.size(); ++i) m = std::max(m, std::abs(values[i]));
  return m;
}

complexd SampledFunction1D::integral() const {
  return values.sum() * grid.dx();
}

double SampledFunction1D::norm() const {
  return std::sqrt(grid.dx() * values.squaredNorm());
}

complexd inner(const SampledFunction1D& f, const SampledFunction1D& g) {
  if (!f.grid.same_as(g.grid)) {
    throw std::invalid_argument("inner: grid mismatch");
  }
  return f.grid.dx() * f.values.dot(g.values);  // Eigen dot conjugates the left factor
}

SampledFunction2D::SampledFunction2D(PhaseGrid g, MatrixXcd v)
    : grid(g), values(std::move(v)) {
  if (values.rows() != grid.q_axis.n() || values.cols() != grid.p_axis.n()) {
    throw std::invalid_argument("SampledFunction2D: shape mismatch with grid");
  }
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      const complexd z = values(i, j);
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw std::invalid_argument("SampledFunction2D: non-finite entry");
      }
    }
  }
}

double SampledFunction2D::max_abs() const {
  return values.cwiseAbs().maxCoeff();
}

complexd SampledFunction2D::integral() const {
  return values.sum() * grid.q_axis.dx() * grid.p_axis.dx();
}

SampledFunction1D sample_function(const LineGrid& grid,
                                  const std::function<complexd(double)>& f) {
  VectorXcd v(grid.n());
  for (int j = 0; j < grid.n(); ++j) v[j] = f(grid.point(j));
  return SampledFunction1D(grid, std::move(v));
}

SampledFunction2D sample_function(const PhaseGrid& grid,
                                  const std::function<complexd(double, double)>& f) {
  MatrixXcd v(grid.q_axis.n(), grid.p_axis.n());
  for (int i = 0; i < grid.q_axis.n(); ++i) {
    const double q = grid.q_axis.point(i);
    for (int j = 0; j < grid.p_axis.n(); ++j) {
      v(i, j) = f(q, grid.p_axis.point(j));
    }
  }
  return SampledFunction2D(grid, std::move(v));
}

SampledFunction1D gaussian_state(const LineGrid& grid, double center,
                                 double width, double momentum) {
  if (!(width > 0)) throw std::invalid_argument("gaussian_state: width must be > 0");
  VectorXcd v(grid.n());
  for (int j = 0; j < grid.n(); ++j) {
    const double x = grid.point(j);
    const double s = (x - center) / width;
    v[j] = std::exp(complexd(-0.5 * s * s, momentum * x));
  }
  SampledFunction1D f(grid, std::move(v));
  f.values /= f.norm();
  return f;
}

SampledFunction1D psi_gaussian_ground(const LineGrid& grid) {
  const double c = std::pow(kPi, -0.25);
  return sample_function(grid, [c](double x) {
    return complexd(c * std::exp(-0.5 * x * x), 0.0);
  });
}

SampledFunction1D psi_hermite_1(const LineGrid& grid) {
  const double c = std::sqrt(2.0) * std::pow(kPi, -0.25);
  return sample_function(grid, [c](double x) {
    return complexd(c * x * std::exp(-0.5 * x * x), 0.0);
  });
}

}  // namespace whq
