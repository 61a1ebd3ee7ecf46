#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "ritzlab/fem.hpp"
#include "ritzlab/mesh.hpp"
#include "ritzlab/sparse.hpp"

using namespace ritzlab;

namespace {

SparseMatrix identity(int n) {
  std::vector<std::vector<std::pair<int, double>>> rows(n);
  for (int i = 0; i < n; ++i) rows[i].emplace_back(i, 1.0);
  return compress_rows(n, std::move(rows));
}

SparseMatrix random_spd(int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<std::vector<std::pair<int, double>>> rows(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if ((rng() % 5) != 0) continue;
      double v = unif(rng);
      rows[i].emplace_back(j, v);
      rows[j].emplace_back(i, v);
    }
  }
  for (int i = 0; i < n; ++i) rows[i].emplace_back(i, 8.0 + unif(rng));
  return compress_rows(n, std::move(rows));
}

}  // namespace

TEST_CASE("cg on identity converges in one iteration") {
  SparseMatrix A = identity(17);
  std::vector<double> b(17);
  for (int i = 0; i < 17; ++i) b[i] = std::sin(1.0 + i);
  auto [x, stats] = cg_solve(A, b);
  CHECK(stats.converged);
  CHECK(stats.iterations == 1);
  for (int i = 0; i < 17; ++i) CHECK(x[i] == doctest::Approx(b[i]).epsilon(1e-15));
}

TEST_CASE("cg reproduces the 2x2 hand solve") {
  std::vector<std::vector<std::pair<int, double>>> rows(2);
  rows[0] = {{0, 2.0}, {1, -1.0}};
  rows[1] = {{0, -1.0}, {1, 2.0}};
  SparseMatrix A = compress_rows(2, std::move(rows));
  auto [x, stats] = cg_solve(A, {1.0, 0.0});
  CHECK(stats.converged);
  CHECK(x[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
  CHECK(x[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("cg matches dense elimination on the cube n=2 interior system") {
  TetMesh mesh = generate(DomainSpec::preset("cube"), 2);
  SparseMatrix A = assemble_stiffness(mesh);
  SparseMatrix A_int = restrict_to(A, mesh.interior_nodes());
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<double> b(A_int.n);
  for (double& v : b) v = unif(rng);
  auto [x, stats] = cg_solve(A_int, b, 1e-13);
  CHECK(stats.converged);
  auto xd = oracle::dense_solve(oracle::to_dense(A_int), b);
  for (int i = 0; i < A_int.n; ++i)
    CHECK(x[i] == doctest::Approx(xd[i]).epsilon(1e-10));
}

TEST_CASE("matvec") {
  SUBCASE("identity acts as identity") {
    SparseMatrix A = identity(5);
    std::vector<double> x = {1, -2, 3, -4, 5};
    CHECK(matvec(A, x) == x);
  }
  SUBCASE("agrees with dense multiply on random matrices, n <= 200") {
    for (unsigned seed : {1u, 2u}) {
      SparseMatrix A = random_spd(180, seed);
      std::mt19937_64 rng(seed + 100);
      std::uniform_real_distribution<double> unif(-1.0, 1.0);
      std::vector<double> x(A.n);
      for (double& v : x) v = unif(rng);
      auto y = matvec(A, x);
      auto D = oracle::to_dense(A);
      for (int i = 0; i < A.n; ++i) {
        double yi = 0.0;
        for (int j = 0; j < A.n; ++j) yi += D[i][j] * x[j];
        CHECK(y[i] == doctest::Approx(yi).epsilon(1e-13));
      }
    }
  }
  SUBCASE("dimension mismatch rejected") {
    CHECK_THROWS_AS(matvec(identity(3), {1.0}), std::invalid_argument);
  }
}

TEST_CASE("restrict_to") {
  TetMesh mesh = generate(DomainSpec::preset("cube"), 2);
  SparseMatrix A = assemble_stiffness(mesh);

  SUBCASE("full index set reproduces A") {
    std::vector<int> all(A.n);
    for (int i = 0; i < A.n; ++i) all[i] = i;
    SparseMatrix B = restrict_to(A, all);
    CHECK(B.nnz() == A.nnz());
    for (int i = 0; i < A.n; ++i)
      for (int k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k)
        CHECK(B.at(i, A.col[k]) == A.val[k]);
  }
  SUBCASE("cube n=2 has one interior node; restriction is its diagonal") {
    auto interior = mesh.interior_nodes();
    REQUIRE(interior.size() == 1);
    SparseMatrix B = restrict_to(A, interior);
    CHECK(B.n == 1);
    CHECK(B.at(0, 0) == A.at(interior[0], interior[0]));
  }
  SUBCASE("composition equals restriction to the subset") {
    std::vector<int> outer_set = {0, 2, 3, 5, 8, 13, 21};
    std::vector<int> inner_set = {1, 2, 4, 6};  // indices into outer_set
    SparseMatrix B = restrict_to(A, outer_set);
    SparseMatrix C = restrict_to(B, inner_set);
    std::vector<int> direct;
    for (int k : inner_set) direct.push_back(outer_set[k]);
    SparseMatrix D = restrict_to(A, direct);
    REQUIRE(C.nnz() == D.nnz());
    for (int i = 0; i < C.n; ++i)
      for (int k = C.row_ptr[i]; k < C.row_ptr[i + 1]; ++k)
        CHECK(C.val[k] == D.at(i, C.col[k]));
  }
  SUBCASE("out-of-range index rejected") {
    CHECK_THROWS_AS(restrict_to(A, {A.n}), std::invalid_argument);
  }
}

TEST_CASE("assembled matrices are symmetric") {
  TetMesh mesh = generate(DomainSpec::preset("fichera"), 2);
  SparseMatrix A = assemble_stiffness(mesh);
  CHECK(symmetry_defect(A) <= 1e-13);
}

TEST_CASE("cg energy error is non-increasing") {
  SparseMatrix A = random_spd(60, 9);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<double> b(A.n);
  for (double& v : b) v = unif(rng);
  auto exact = oracle::dense_solve(oracle::to_dense(A), b);
  auto energy_error = [&](int iters) {
    auto [x, stats] = cg_solve(A, b, 0.0, iters);
    (void)stats;
    std::vector<double> e(A.n);
    for (int i = 0; i < A.n; ++i) e[i] = x[i] - exact[i];
    auto Ae = matvec(A, e);
    double s = 0.0;
    for (int i = 0; i < A.n; ++i) s += e[i] * Ae[i];
    return s;
  };
  double prev = energy_error(1);
  for (int iters = 2; iters <= 12; ++iters) {
    double cur = energy_error(iters);
    CHECK(cur <= prev * (1.0 + 1e-12) + 1e-30);
    prev = cur;
  }
}

TEST_CASE("error paths") {
  SparseMatrix A = identity(3);
  SUBCASE("non-finite rhs aborts") {
    CHECK_THROWS_AS(cg_solve(A, {1.0, std::nan(""), 0.0}), std::runtime_error);
  }
  SUBCASE("maxit exhausted reports converged = false") {
    SparseMatrix B = random_spd(80, 3);
    std::vector<double> b(B.n, 1.0);
    auto [x, stats] = cg_solve(B, b, 1e-15, 1);
    (void)x;
    CHECK(!stats.converged);
  }
  SUBCASE("zero rhs returns zero immediately") {
    auto [x, stats] = cg_solve(A, {0.0, 0.0, 0.0});
    CHECK(stats.converged);
    CHECK(stats.iterations == 0);
    CHECK(x == std::vector<double>{0.0, 0.0, 0.0});
  }
}

TEST_CASE("triplet dump has the declared header") {
  SparseMatrix A = identity(3);
  std::ostringstream os;
  write_triplets(os, A);
  CHECK(os.str().substr(0, 4) == "3 3\n");
}
