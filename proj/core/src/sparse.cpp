#include "ritzlab/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace ritzlab {

double SparseMatrix::at(int i, int j) const {
  auto begin = col.begin() + row_ptr[i];
  auto end = col.begin() + row_ptr[i + 1];
  auto it = std::lower_bound(begin, end, j);
  if (it == end || *it != j) return 0.0;
  return val[it - col.begin()];
}

SparseMatrix compress_rows(
    int n, std::vector<std::vector<std::pair<int, double>>>&& rows) {
  SparseMatrix A;
  A.n = n;
  A.row_ptr.assign(n + 1, 0);
  for (int i = 0; i < n; ++i) {
    auto& row = rows[i];
    std::sort(row.begin(), row.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    int count = 0;
    std::size_t w = 0;
    for (std::size_t r = 0; r < row.size(); ++r) {
      if (w > 0 && row[w - 1].first == row[r].first) {
        row[w - 1].second += row[r].second;
      } else {
        row[w++] = row[r];
        ++count;
      }
    }
    row.resize(w);
    A.row_ptr[i + 1] = A.row_ptr[i] + count;
  }
  A.col.resize(A.row_ptr[n]);
  A.val.resize(A.row_ptr[n]);
  for (int i = 0; i < n; ++i) {
    int off = A.row_ptr[i];
    for (const auto& [j, v] : rows[i]) {
      if (j < 0 || j >= n) throw std::invalid_argument("column out of range");
      A.col[off] = j;
      A.val[off] = v;
      ++off;
    }
  }
  return A;
}

std::vector<double> matvec(const SparseMatrix& A, const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != A.n)
    throw std::invalid_argument("matvec dimension mismatch");
  std::vector<double> y(A.n, 0.0);
  for (int i = 0; i < A.n; ++i) {
    double sum = 0.0;
    for (int k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k)
      sum += A.val[k] * x[A.col[k]];
    y[i] = sum;
  }
  return y;
}

SparseMatrix restrict_to(const SparseMatrix& A, const std::vector<int>& keep) {
  std::vector<int> new_id(A.n, -1);
  for (std::size_t k = 0; k < keep.size(); ++k) {
    int i = keep[k];
    if (i < 0 || i >= A.n)
      throw std::invalid_argument("restrict index out of range");
    if (new_id[i] >= 0) throw std::invalid_argument("restrict index repeated");
    new_id[i] = static_cast<int>(k);
  }
  const int m = static_cast<int>(keep.size());
  std::vector<std::vector<std::pair<int, double>>> rows(m);
  for (int k = 0; k < m; ++k) {
    int i = keep[k];
    for (int p = A.row_ptr[i]; p < A.row_ptr[i + 1]; ++p) {
      int j = new_id[A.col[p]];
      if (j >= 0) rows[k].emplace_back(j, A.val[p]);
    }
  }
  return compress_rows(m, std::move(rows));
}

namespace {

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double dotv(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

std::pair<std::vector<double>, SolveStats> cg_solve(const SparseMatrix& A,
                                                    const std::vector<double>& b,
                                                    double rtol, int maxit) {
  const int n = A.n;
  if (static_cast<int>(b.size()) != n)
    throw std::invalid_argument("cg_solve dimension mismatch");
  for (double x : b)
    if (!std::isfinite(x))
      throw std::runtime_error("cg_solve: non-finite right-hand side");
  if (maxit < 0)
    maxit = static_cast<int>(20.0 * std::sqrt(static_cast<double>(n))) + 10;

  SolveStats stats;
  std::vector<double> x(n, 0.0);
  double bnorm = norm2(b);
  if (bnorm == 0.0) {
    stats.converged = true;
    return {x, stats};
  }

  std::vector<double> diag(n, 1.0);
  for (int i = 0; i < n; ++i) {
    double d = A.at(i, i);
    if (d > 0.0) diag[i] = 1.0 / d;
  }

  std::vector<double> r = b;  // x = 0
  std::vector<double> z(n), p(n), Ap;
  for (int i = 0; i < n; ++i) z[i] = diag[i] * r[i];
  p = z;
  double rz = dotv(r, z);
  for (int it = 0; it < maxit; ++it) {
    Ap = matvec(A, p);
    double pAp = dotv(p, Ap);
    if (!std::isfinite(pAp) || pAp <= 0.0)
      throw std::runtime_error("cg_solve: matrix is not positive definite");
    double alpha = rz / pAp;
    for (int i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * Ap[i];
    }
    stats.iterations = it + 1;
    if (norm2(r) <= rtol * bnorm) break;
    for (int i = 0; i < n; ++i) z[i] = diag[i] * r[i];
    double rz_next = dotv(r, z);
    double beta = rz_next / rz;
    rz = rz_next;
    for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }

  // true residual, not the recurrence residual
  std::vector<double> Ax = matvec(A, x);
  double res = 0.0;
  for (int i = 0; i < n; ++i) {
    double d = b[i] - Ax[i];
    res += d * d;
  }
  stats.relative_residual = std::sqrt(res) / bnorm;
  stats.converged = stats.relative_residual <= rtol;
  for (double v : x)
    if (!std::isfinite(v))
      throw std::runtime_error("cg_solve: non-finite solution");
  return {x, stats};
}

double symmetry_defect(const SparseMatrix& A) {
  double max_abs = 0.0, worst = 0.0;
  for (int i = 0; i < A.n; ++i) {
    for (int k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k) {
      int j = A.col[k];
      max_abs = std::max(max_abs, std::abs(A.val[k]));
      worst = std::max(worst, std::abs(A.val[k] - A.at(j, i)));
    }
  }
  return max_abs > 0.0 ? worst / max_abs : 0.0;
}

void write_triplets(std::ostream& os, const SparseMatrix& A) {
  os << A.n << " " << A.nnz() << "\n";
  char buf[64];
  for (int i = 0; i < A.n; ++i) {
    for (int k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k) {
      std::snprintf(buf, sizeof(buf), "%.17g", A.val[k]);
      os << i << " " << A.col[k] << " " << buf << "\n";
    }
  }
}

}  // namespace ritzlab
