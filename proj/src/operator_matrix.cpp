#include "whq/operator_matrix.hpp"

#include <cmath>
#include <stdexcept>

#include "whq/transforms.hpp"

namespace whq {

OperatorMatrix::OperatorMatrix(LineGrid g, MatrixXcd m)
    : grid(g),
      entries(std::move(m)),
      quadrature_weight(g.dx()),
      hermitian_flag(false) {
  if (entries.rows() != grid.n() || entries.cols() != grid.n()) {
    throw std::invalid_argument("OperatorMatrix: shape mismatch with grid");
  }
  if (!entries.allFinite()) {
    throw std::invalid_argument("OperatorMatrix: non-finite entries");
  }
  refresh_hermitian_flag();
}

double OperatorMatrix::hermiticity_residual() const {
  return (entries - entries.adjoint()).cwiseAbs().maxCoeff();
}

void OperatorMatrix::refresh_hermitian_flag(double tol) {
  hermitian_flag = hermiticity_residual() < tol;
}

VectorXcd OperatorMatrix::apply(const VectorXcd& phi) const {
  if (phi.size() != entries.cols()) {
    throw std::invalid_argument("OperatorMatrix::apply: size mismatch");
  }
  return entries * phi;
}

SampledFunction1D OperatorMatrix::apply(const SampledFunction1D& phi) const {
  if (!phi.grid.same_as(grid)) {
    throw std::invalid_argument("OperatorMatrix::apply: grid mismatch");
  }
  return SampledFunction1D(grid, entries * phi.values);
}

complexd OperatorMatrix::trace() const { return entries.trace(); }

OperatorMatrix identity_operator(const LineGrid& grid) {
  return OperatorMatrix(grid, MatrixXcd::Identity(grid.n(), grid.n()));
}

OperatorMatrix diagonal_operator(const LineGrid& grid, const VectorXcd& diag) {
  if (diag.size() != grid.n()) {
    throw std::invalid_argument("diagonal_operator: size mismatch");
  }
  MatrixXcd m = MatrixXcd::Zero(grid.n(), grid.n());
  m.diagonal() = diag;
  return OperatorMatrix(grid, std::move(m));
}

OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b) {
  if (!a.grid.same_as(b.grid)) {
    throw std::invalid_argument("commutator: grid mismatch");
  }
  return OperatorMatrix(a.grid, a.entries * b.entries - b.entries * a.entries);
}

OperatorMatrix position_matrix(const LineGrid& grid) {
  VectorXcd diag(grid.n());
  for (int j = 0; j < grid.n(); ++j) diag[j] = grid.point(j);
  return diagonal_operator(grid, diag);
}

namespace {

// Transform-domain multiplication operator g(p): Finv * diag(g(p_k)) * Ffwd,
// assembled by applying the chain to basis vectors.
MatrixXcd spectral_multiplier(const LineGrid& grid,
                              const std::function<double(double)>& g) {
  const int n = grid.n();
  const LineGrid dual = grid.dual();
  MatrixXcd m(n, n);
  for (int j = 0; j < n; ++j) {
    VectorXcd e = VectorXcd::Zero(n);
    e[j] = 1.0;
    SampledFunction1D F =
        fourier_to_grid(SampledFunction1D(grid, std::move(e)), dual,
                        Direction::forward, 0.0);
    for (int k = 0; k < n; ++k) F.values[k] *= g(dual.point(k));
    m.col(j) = fourier_to_grid(F, grid, Direction::inverse, 0.0).values;
  }
  return m;
}

}  // namespace

OperatorMatrix momentum_matrix(const LineGrid& grid, Scheme scheme) {
  const int n = grid.n();
  if (scheme == Scheme::spectral) {
    return OperatorMatrix(grid, spectral_multiplier(grid, [](double p) { return p; }));
  }
  MatrixXcd m = MatrixXcd::Zero(n, n);
  const complexd c(0.0, -0.5 / grid.dx());  // -i * 1/(2 dx)
  for (int j = 0; j + 1 < n; ++j) {
    m(j, j + 1) = c;
    m(j + 1, j) = -c;
  }
  return OperatorMatrix(grid, std::move(m));
}

OperatorMatrix kinetic_matrix(const LineGrid& grid, Scheme scheme) {
  const int n = grid.n();
  if (scheme == Scheme::spectral) {
    return OperatorMatrix(grid, spectral_multiplier(grid, [](double p) { return p * p; }));
  }
  MatrixXcd m = MatrixXcd::Zero(n, n);
  const double inv = 1.0 / (grid.dx() * grid.dx());
  for (int j = 0; j < n; ++j) {
    m(j, j) = 2.0 * inv;
    if (j + 1 < n) {
      m(j, j + 1) = -inv;
      m(j + 1, j) = -inv;
    }
  }
  return OperatorMatrix(grid, std::move(m));
}

}  // namespace whq
