// Test-only oracles, independent of the implementation paths they check.
#pragma once

#include <array>
#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

#include "ritzlab/geometry.hpp"
#include "ritzlab/mesh.hpp"
#include "ritzlab/sparse.hpp"

namespace oracle {

// Dense Gaussian elimination with partial pivoting.
inline std::vector<double> dense_solve(std::vector<std::vector<double>> A,
                                       std::vector<double> b) {
  const int n = static_cast<int>(b.size());
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(A[i][k]) > std::abs(A[piv][k])) piv = i;
    std::swap(A[k], A[piv]);
    std::swap(b[k], b[piv]);
    if (A[k][k] == 0.0) throw std::runtime_error("dense_solve: singular matrix");
    for (int i = k + 1; i < n; ++i) {
      double f = A[i][k] / A[k][k];
      for (int j = k; j < n; ++j) A[i][j] -= f * A[k][j];
      b[i] -= f * b[k];
    }
  }
  std::vector<double> x(n);
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (int j = i + 1; j < n; ++j) s -= A[i][j] * x[j];
    x[i] = s / A[i][i];
  }
  return x;
}

inline std::vector<std::vector<double>> to_dense(const ritzlab::SparseMatrix& A) {
  std::vector<std::vector<double>> D(A.n, std::vector<double>(A.n, 0.0));
  for (int i = 0; i < A.n; ++i)
    for (int k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k)
      D[i][A.col[k]] += A.val[k];
  return D;
}

// Interior dihedral angles from outward face normals, written directly from
// the defining formula acos(-n1.n2).
inline std::array<double, 6> dihedral_angles(const std::array<ritzlab::Vec3, 4>& v) {
  using ritzlab::Vec3;
  using ritzlab::cross;
  using ritzlab::dot;
  using ritzlab::norm;
  std::array<Vec3, 4> n;
  const std::array<std::array<int, 3>, 4> faces = {
      {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}}};
  for (int f = 0; f < 4; ++f) {
    Vec3 a = v[faces[f][0]], b = v[faces[f][1]], c = v[faces[f][2]];
    Vec3 nn = cross(b - a, c - a);
    nn = nn / norm(nn);
    if (dot(nn, v[f] - a) > 0.0) nn = nn * -1.0;
    n[f] = nn;
  }
  const std::array<std::array<int, 2>, 6> edges = {
      {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
  std::array<double, 6> out;
  for (int e = 0; e < 6; ++e) {
    int f1 = -1, f2 = -1;
    for (int i = 0; i < 4; ++i)
      if (i != edges[e][0] && i != edges[e][1]) (f1 < 0 ? f1 : f2) = i;
    double c = -dot(n[f1], n[f2]);
    out[e] = std::acos(std::max(-1.0, std::min(1.0, c)));
  }
  return out;
}

// Brute-force edge and face counts for Euler checks.
inline std::pair<std::size_t, std::size_t> count_edges_faces(
    const ritzlab::TetMesh& mesh) {
  std::set<std::array<int, 2>> edges;
  std::set<std::array<int, 3>> faces;
  for (const auto& t : mesh.tets) {
    for (int i = 0; i < 4; ++i) {
      for (int j = i + 1; j < 4; ++j) {
        std::array<int, 2> e = {t[i], t[j]};
        if (e[0] > e[1]) std::swap(e[0], e[1]);
        edges.insert(e);
        for (int k = j + 1; k < 4; ++k) {
          std::array<int, 3> f = {t[i], t[j], t[k]};
          std::sort(f.begin(), f.end());
          faces.insert(f);
        }
      }
    }
  }
  return {edges.size(), faces.size()};
}

// Exact integral of x^a y^b z^c over the reference tetrahedron
// (0,0,0),(1,0,0),(0,1,0),(0,0,1): a! b! c! / (a+b+c+3)!.
inline double reference_tet_monomial(int a, int b, int c) {
  auto fact = [](int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
  };
  return fact(a) * fact(b) * fact(c) / fact(a + b + c + 3);
}

// Exact integral of x^a y^b over the reference triangle (0,0),(1,0),(0,1).
inline double reference_tri_monomial(int a, int b) {
  auto fact = [](int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
  };
  return fact(a) * fact(b) / fact(a + b + 2);
}

}  // namespace oracle
