#pragma once

#include "whq/grid.hpp"

namespace whq {

/// Dense operator on a LineGrid. `entries` is the direct action matrix:
/// (A phi)_i = sum_j entries(i,j) phi_j, so multiplication operators are
/// plain diagonals and the identity is I. The continuum integral kernel
/// of Eq.-style integral operators is entries / quadrature_weight, with
/// quadrature_weight = dx (kernel action \int K(x,x') phi(x') dx' is then
/// dx * K * phi = entries * phi).
struct OperatorMatrix {
  LineGrid grid;
  MatrixXcd entries;
  double quadrature_weight;
  bool hermitian_flag;
  std::vector<std::string> warnings;

  OperatorMatrix(LineGrid g, MatrixXcd m);

  int n() const { return grid.n(); }

  /// max_ij |M - M^dagger|.
  double hermiticity_residual() const;

  /// Measures the residual and sets hermitian_flag iff it is < tol.
  void refresh_hermitian_flag(double tol = 1e-9);

  VectorXcd apply(const VectorXcd& phi) const;
  SampledFunction1D apply(const SampledFunction1D& phi) const;

  /// Plain matrix trace; equals dx * sum of the kernel diagonal.
  complexd trace() const;
};

OperatorMatrix identity_operator(const LineGrid& grid);
OperatorMatrix diagonal_operator(const LineGrid& grid, const VectorXcd& diag);

/// AB - BA on a shared grid.
OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b);

enum class Scheme { spectral, central_diff };

/// Q = diag(x_j).
OperatorMatrix position_matrix(const LineGrid& grid);

/// P = -i d/dx: either the transform-domain multiplication by p (exactly
/// Hermitian on the periodic grid) or antisymmetric central differences.
OperatorMatrix momentum_matrix(const LineGrid& grid, Scheme scheme = Scheme::spectral);

/// P^2 = -d^2/dx^2, same two schemes.
OperatorMatrix kinetic_matrix(const LineGrid& grid, Scheme scheme = Scheme::spectral);

}  // namespace whq
