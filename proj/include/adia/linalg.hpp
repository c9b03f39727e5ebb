#ifndef ADIA_LINALG_HPP
#define ADIA_LINALG_HPP

#include <vector>

#include "adia/complex_matrix.hpp"

namespace adia {

enum class ExecutionPolicy { Serial, Parallel };

struct EigenDecomposition {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;       // unit-norm columns, canonical phase
  double min_gap = 0.0;        // smallest adjacent eigenvalue spacing
  bool degenerate = false;     // min_gap < 1e-10
};

// Hermitian eigendecomposition by cyclic Jacobi with complex rotations.
// Column phases are canonical: the largest-magnitude entry is real positive.
// Throws NotHermitian when max |H - H^dagger| exceeds hermitian_tol.
EigenDecomposition eigh(const ComplexMatrix& h, double hermitian_tol = 1e-12);

// In-place core used by the hot loops: `a` is destroyed, eigenvectors land in
// `vectors`, eigenvalues in `values` (both resized as needed). No canonical
// phase fixing and no ascending sort unless `sort_and_fix` is set.
void eigh_inplace(ComplexMatrix& a, std::vector<double>& values, ComplexMatrix& vectors,
                  bool sort_and_fix = true);

// exp(-i H dt) psi through the eigendecomposition; unitary by construction.
State propagate_step(const ComplexMatrix& h, double dt, const State& psi,
                     double hermitian_tol = 1e-12);

// Batch decomposition of independent matrices; the OpenMP lane of the kernel.
// Serial and parallel policies produce identical output.
std::vector<EigenDecomposition> eigh_batch(const std::vector<ComplexMatrix>& hs,
                                           ExecutionPolicy exec = ExecutionPolicy::Parallel,
                                           double hermitian_tol = 1e-12);

}  // namespace adia

#endif
