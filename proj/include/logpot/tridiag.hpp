#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace logpot {

// Number of eigenvalues strictly below x of the symmetric tridiagonal matrix
// with diagonal `diag` and squared off-diagonal `off_sq` (size n - 1).
std::size_t sturm_count(std::span<const double> diag, std::span<const double> off_sq, double x);

// All eigenvalues, ascending. Sturm-count bisection isolates each eigenvalue;
// a safeguarded Newton iteration on the characteristic polynomial then
// finishes it to working precision.
std::vector<double> tridiagonal_eigenvalues(std::span<const double> diag, std::span<const double> off);

// Same spectrum by implicit QR (absolute accuracy ~ eps ||J||). Several times
// faster than bisection for n in the thousands; used for density of states.
std::vector<double> tridiagonal_eigenvalues_qr(std::span<const double> diag, std::span<const double> off);

}  // namespace logpot
