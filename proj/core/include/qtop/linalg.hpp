#pragma once

#include "qtop/types.hpp"

namespace qtop::linalg {

// Singular values in decreasing order.
RealVector singular_values(const Matrix& m);

double sigma_min(const Matrix& m);

struct SvdSolve {
  Matrix x;                     // minimum-norm least-squares solution of a x = b
  RealVector singular_values;  // of a, decreasing
};

SvdSolve svd_solve(const Matrix& a, const Matrix& b);

// sigma_max / sigma_min; +inf for singular input.
double condition_number(const Matrix& m);

// Number of singular values below rel_tol * sigma_max.
int numerical_nullity(const RealVector& singular_values_desc, double rel_tol);

struct HermitianEigen {
  RealVector values;  // ascending
  Matrix vectors;     // columns
};

HermitianEigen hermitian_eigen(const Matrix& h);

double hermiticity_defect(const Matrix& m);

}  // namespace qtop::linalg
