#pragma once

#include <iosfwd>
#include <utility>
#include <vector>

namespace ritzlab {

// Symmetric compressed-sparse-row matrix; columns sorted within each row.
struct SparseMatrix {
  int n = 0;
  std::vector<int> row_ptr;
  std::vector<int> col;
  std::vector<double> val;

  int nnz() const { return static_cast<int>(col.size()); }
  double at(int i, int j) const;  // 0 if the entry is not stored
};

struct SolveStats {
  int iterations = 0;
  double relative_residual = 0.0;  // true residual ||b - Ax|| / ||b||
  bool converged = false;
};

// Builds CSR from per-row (col, value) lists; duplicate columns are summed.
SparseMatrix compress_rows(
    int n, std::vector<std::vector<std::pair<int, double>>>&& rows);

std::vector<double> matvec(const SparseMatrix& A, const std::vector<double>& x);

// Principal submatrix on the given (sorted, unique) index set.
SparseMatrix restrict_to(const SparseMatrix& A, const std::vector<int>& keep);

// Jacobi-preconditioned conjugate gradients. maxit < 0 means the default
// cap of 20*sqrt(n). The reported residual is recomputed from A and b at
// exit. Throws std::runtime_error on non-finite values.
std::pair<std::vector<double>, SolveStats> cg_solve(const SparseMatrix& A,
                                                    const std::vector<double>& b,
                                                    double rtol = 1e-12,
                                                    int maxit = -1);

// Largest relative symmetry defect max|A - A^T| / max|A|.
double symmetry_defect(const SparseMatrix& A);

// Debug dump: header "n nnz", then one "i j v" triplet per line.
void write_triplets(std::ostream& os, const SparseMatrix& A);

}  // namespace ritzlab
