#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "ritzlab/fem.hpp"
#include "ritzlab/mesh.hpp"
#include "ritzlab/stability.hpp"

using namespace ritzlab;

namespace {

constexpr double kPi = 3.14159265358979323846;

const std::array<Vec3, 4> kRefTet = {Vec3{0, 0, 0}, Vec3{1, 0, 0},
                                     Vec3{0, 1, 0}, Vec3{0, 0, 1}};
const std::array<Vec3, 4> kPathTet = {Vec3{0, 0, 0}, Vec3{1, 0, 0},
                                      Vec3{1, 1, 0}, Vec3{1, 1, 1}};

TetMesh reference_tet_mesh() {
  TetMesh mesh;
  mesh.vertices = {kRefTet[0], kRefTet[1], kRefTet[2], kRefTet[3]};
  mesh.tets = {{0, 1, 2, 3}};
  mesh.finalize();
  return mesh;
}

ScalarField linear_field() {
  ScalarField u;
  u.value = [](const Vec3& p) { return 1.0 + 2.0 * p.x - 3.0 * p.y + p.z; };
  u.gradient = [](const Vec3&) { return Vec3{2.0, -3.0, 1.0}; };
  return u;
}

ScalarField sinprod_field(double L) {
  ScalarField u;
  double k = kPi / L;
  u.value = [k](const Vec3& p) {
    return std::sin(k * p.x) * std::sin(k * p.y) * std::sin(k * p.z);
  };
  u.gradient = [k](const Vec3& p) {
    return Vec3{k * std::cos(k * p.x) * std::sin(k * p.y) * std::sin(k * p.z),
                k * std::sin(k * p.x) * std::cos(k * p.y) * std::sin(k * p.z),
                k * std::sin(k * p.x) * std::sin(k * p.y) * std::cos(k * p.z)};
  };
  return u;
}

}  // namespace

TEST_CASE("barycentric gradients on the reference tet") {
  auto g = barycentric_gradients(kRefTet);
  CHECK(norm(g[0] - Vec3{-1, -1, -1}) < 1e-14);
  CHECK(norm(g[1] - Vec3{1, 0, 0}) < 1e-14);
  CHECK(norm(g[2] - Vec3{0, 1, 0}) < 1e-14);
  CHECK(norm(g[3] - Vec3{0, 0, 1}) < 1e-14);
}

TEST_CASE("barycentric gradients: partition of unity and Kronecker pattern") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::array<Vec3, 4> v;
    do {
      for (auto& p : v) p = {unif(rng), unif(rng), unif(rng)};
    } while (signed_volume(v[0], v[1], v[2], v[3]) < 1e-3);
    auto g = barycentric_gradients(v);
    CHECK(norm(g[0] + g[1] + g[2] + g[3]) < 1e-10);
    // lambda_i(v_j) = delta_ij implies grad(lambda_i) . (v_j - v_k) pattern
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        CHECK(dot(g[i], v[j] - v[i]) == doctest::Approx(j == i ? 0.0 : -1.0)
                                            .epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("Kuhn path tet gradients match the affine-system oracle") {
  auto g = barycentric_gradients(kPathTet);
  // oracle: solve the 4x4 interpolation system for each lambda_i
  for (int i = 0; i < 4; ++i) {
    std::vector<std::vector<double>> M(4, std::vector<double>(4));
    std::vector<double> rhs(4, 0.0);
    for (int j = 0; j < 4; ++j) {
      M[j] = {kPathTet[j].x, kPathTet[j].y, kPathTet[j].z, 1.0};
      rhs[j] = (i == j) ? 1.0 : 0.0;
    }
    auto coeff = oracle::dense_solve(M, rhs);
    CHECK(g[i].x == doctest::Approx(coeff[0]).epsilon(1e-13));
    CHECK(g[i].y == doctest::Approx(coeff[1]).epsilon(1e-13));
    CHECK(g[i].z == doctest::Approx(coeff[2]).epsilon(1e-13));
  }
  CHECK_THROWS_AS(
      barycentric_gradients({Vec3{0, 0, 0}, Vec3{1, 0, 0}, Vec3{0, 1, 0},
                             Vec3{1, 1, 0}}),
      std::invalid_argument);
}

TEST_CASE("quadrature rules: positive weights summing to reference measure") {
  const TetRule& tet = tet_rule_deg4();
  double sum = 0.0;
  for (double w : tet.weights) {
    CHECK(w > 0.0);
    sum += w;
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
  for (const TriRule* tri : {&tri_rule_deg4(), &tri_rule_deg6()}) {
    double tsum = 0.0;
    for (double w : tri->weights) {
      CHECK(w > 0.0);
      tsum += w;
    }
    CHECK(tsum == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("tet rule integrates monomials of degree <= 4 exactly") {
  const TetRule& rule = tet_rule_deg4();
  for (int a = 0; a <= 4; ++a) {
    for (int b = 0; a + b <= 4; ++b) {
      for (int c = 0; a + b + c <= 4; ++c) {
        double q = 0.0;
        for (std::size_t i = 0; i < rule.points.size(); ++i) {
          const auto& bc = rule.points[i];
          // reference tet: x = bc[1], y = bc[2], z = bc[3]
          q += rule.weights[i] * std::pow(bc[1], a) * std::pow(bc[2], b) *
               std::pow(bc[3], c);
        }
        q /= 6.0;  // reference tet volume
        CHECK(q == doctest::Approx(oracle::reference_tet_monomial(a, b, c))
                       .epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("triangle rules integrate monomials up to their degree exactly") {
  auto check_rule = [](const TriRule& rule, int degree) {
    for (int a = 0; a <= degree; ++a) {
      for (int b = 0; a + b <= degree; ++b) {
        double q = 0.0;
        for (std::size_t i = 0; i < rule.points.size(); ++i) {
          const auto& bc = rule.points[i];
          q += rule.weights[i] * std::pow(bc[1], a) * std::pow(bc[2], b);
        }
        q /= 2.0;  // reference triangle area
        CHECK(q == doctest::Approx(oracle::reference_tri_monomial(a, b))
                       .epsilon(1e-12));
      }
    }
  };
  check_rule(tri_rule_deg4(), 4);
  check_rule(tri_rule_deg6(), 6);
}

TEST_CASE("stiffness of the reference tet") {
  TetMesh mesh = reference_tet_mesh();
  SparseMatrix A = assemble_stiffness(mesh);
  // oracle: |T| G G^T with the closed-form gradients
  auto g = barycentric_gradients(kRefTet);
  double vol = 1.0 / 6.0;
  for (int i = 0; i < 4; ++i) {
    double row_sum = 0.0;
    for (int j = 0; j < 4; ++j) {
      CHECK(A.at(i, j) == doctest::Approx(vol * dot(g[i], g[j])).epsilon(1e-14));
      row_sum += A.at(i, j);
    }
    CHECK(row_sum == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
  }
  CHECK(A.at(0, 0) == doctest::Approx(0.5));
  CHECK(A.at(1, 1) == doctest::Approx(1.0 / 6.0));
  CHECK(A.at(2, 2) == doctest::Approx(1.0 / 6.0));
  CHECK(A.at(3, 3) == doctest::Approx(1.0 / 6.0));
}

TEST_CASE("stiffness kernel contains constants; rows sum to zero") {
  TetMesh mesh = generate(DomainSpec::preset("lprism"), 2);
  SparseMatrix A = assemble_stiffness(mesh);
  std::vector<double> ones(A.n, 1.0);
  auto y = matvec(A, ones);
  for (double v : y) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("cube n=2: interior-row off-diagonals nonpositive") {
  TetMesh mesh = generate(DomainSpec::preset("cube"), 2);
  SparseMatrix A = assemble_stiffness(mesh);
  for (int i : mesh.interior_nodes())
    for (int k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k)
      if (A.col[k] != i) CHECK(A.val[k] <= 1e-13);
}

TEST_CASE("ritz projection reproduces V_h members") {
  SUBCASE("linear function on fichera n=2") {
    TetMesh mesh = generate(DomainSpec::preset("fichera"), 2);
    ScalarField u = linear_field();
    RitzResult r = ritz_project(mesh, u);
    for (int i = 0; i < mesh.num_vertices(); ++i)
      CHECK(std::abs(r.field.values[i] - u(mesh.vertices[i])) <= 1e-9);
  }
  SUBCASE("random P1 fields on cube n=2") {
    TetMesh mesh = generate(DomainSpec::preset("cube"), 2);
    SparseMatrix A = assemble_stiffness(mesh);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<double> vals(mesh.num_vertices());
      for (double& v : vals) v = unif(rng);
      // projection identity checked through the linear system directly:
      // interior residual of the nodal vector must vanish
      auto y = matvec(A, vals);
      std::vector<double> g(mesh.num_vertices(), 0.0);
      for (int i = 0; i < mesh.num_vertices(); ++i) g[i] = vals[i];
      // build rhs as ritz_project would, with exact discrete load A*vals
      auto interior = mesh.interior_nodes();
      SparseMatrix A_int = restrict_to(A, interior);
      std::vector<double> rhs(interior.size());
      for (std::size_t k = 0; k < interior.size(); ++k) {
        int i = interior[k];
        double b = y[i];
        for (int p = A.row_ptr[i]; p < A.row_ptr[i + 1]; ++p)
          if (mesh.node_on_boundary[A.col[p]]) b -= A.val[p] * vals[A.col[p]];
        rhs[k] = b;
      }
      auto [x, stats] = cg_solve(A_int, rhs, 1e-13);
      CHECK(stats.converged);
      for (std::size_t k = 0; k < interior.size(); ++k)
        CHECK(std::abs(x[k] - vals[interior[k]]) <= 1e-9);
    }
  }
}

TEST_CASE("ritz projection matches dense elimination for sinprod on cube n=2") {
  TetMesh mesh = generate(DomainSpec::preset("cube"), 2);
  SparseMatrix A = assemble_stiffness(mesh);
  ScalarField u = sinprod_field(1.0);
  RitzResult r = ritz_project(mesh, A, u);

  auto interior = mesh.interior_nodes();
  auto load = gradient_load(mesh, u);
  std::vector<double> rhs(interior.size());
  for (std::size_t k = 0; k < interior.size(); ++k) {
    int i = interior[k];
    double b = load[i];
    for (int p = A.row_ptr[i]; p < A.row_ptr[i + 1]; ++p)
      if (mesh.node_on_boundary[A.col[p]])
        b -= A.val[p] * u(mesh.vertices[A.col[p]]);
    rhs[k] = b;
  }
  auto xd = oracle::dense_solve(oracle::to_dense(restrict_to(A, interior)), rhs);
  for (std::size_t k = 0; k < interior.size(); ++k)
    CHECK(r.field.values[interior[k]] == doctest::Approx(xd[k]).epsilon(1e-10));
}

TEST_CASE("ritz projection refuses fields without analytic gradients") {
  TetMesh mesh = generate(DomainSpec::preset("cube"), 1);
  ScalarField u;
  u.value = [](const Vec3& p) { return p.x; };
  CHECK_THROWS_AS(ritz_project(mesh, u), std::invalid_argument);
}

TEST_CASE("energy minimization over matching boundary values") {
  TetMesh mesh = generate(DomainSpec::preset("cube"), 3);
  SparseMatrix A = assemble_stiffness(mesh);
  ScalarField u = sinprod_field(1.0);
  RitzResult r = ritz_project(mesh, A, u);
  auto load = gradient_load(mesh, u);

  // E(v) = v^T A v - 2 v^T load is minimized by the Ritz projection among
  // discrete fields with the same boundary values
  auto energy = [&](const std::vector<double>& v) {
    auto Av = matvec(A, v);
    double e = 0.0;
    for (int i = 0; i < A.n; ++i) e += v[i] * Av[i] - 2.0 * v[i] * load[i];
    return e;
  };
  double e_ritz = energy(r.field.values);
  NodalField ih = interpolate(mesh, u);
  CHECK(e_ritz <= energy(ih.values) + 1e-12);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unif(-0.5, 0.5);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> v = r.field.values;
    for (int i : mesh.interior_nodes()) v[i] += unif(rng);
    CHECK(e_ritz <= energy(v) + 1e-12);
  }
}

TEST_CASE("interpolation") {
  SUBCASE("linear exactness") {
    TetMesh mesh = generate(DomainSpec::preset("lprism"), 2);
    ScalarField u = linear_field();
    NodalField f = interpolate(mesh, u);
    CHECK(sampled_interp_error(mesh, f, u) < 1e-13);
  }
  SUBCASE("x^2 nodal values on the reference tet") {
    TetMesh mesh = reference_tet_mesh();
    ScalarField u;
    u.value = [](const Vec3& p) { return p.x * p.x; };
    NodalField f = interpolate(mesh, u);
    CHECK(f.values == std::vector<double>{0.0, 1.0, 0.0, 0.0});
  }
  SUBCASE("second-order convergence for sin products") {
    ScalarField u = sinprod_field(1.0);
    DomainSpec spec = DomainSpec::preset("cube");
    std::vector<double> errs, hs;
    for (int n : {4, 8, 16}) {
      TetMesh mesh = generate(spec, n);
      NodalField f = interpolate(mesh, u);
      errs.push_back(sampled_interp_error(mesh, f, u));
      hs.push_back(metrics(mesh).h_max);
    }
    for (std::size_t k = 1; k < errs.size(); ++k) {
      double slope = std::log(errs[k - 1] / errs[k]) / std::log(hs[k - 1] / hs[k]);
      // pairwise slopes wobble more than a regression fit; keep a loose band
      CHECK(slope > 1.7);
      CHECK(slope < 2.3);
    }
  }
}

TEST_CASE("aux rhs functional") {
  DomainSpec spec = DomainSpec::preset("cube");
  TetMesh mesh = generate(spec, 2);
  ExtendedMesh ext = extend_to_box(mesh, spec, 1);

  SUBCASE("zero datum gives the zero vector") {
    ScalarField zero;
    zero.value = [](const Vec3&) { return 0.0; };
    auto rhs = aux_rhs_functional(ext, zero);
    for (double v : rhs) CHECK(v == 0.0);
  }
  SUBCASE("discrete datum: functional equals the stiffness matvec") {
    // elementwise integration by parts is exact for piecewise linears
    SparseMatrix A = assemble_stiffness(ext.outer);
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    NodalField v;
    v.mesh = &ext.outer;
    v.values.resize(ext.outer.num_vertices());
    for (int i = 0; i < ext.outer.num_vertices(); ++i)
      v.values[i] = ext.outer.node_on_boundary[i] ? 0.0 : unif(rng);
    auto rhs = aux_rhs_functional(ext, v);
    auto Av = matvec(A, v.values);
    double scale = 0.0;
    for (double x : Av) scale = std::max(scale, std::abs(x));
    for (int i = 0; i < ext.outer.num_vertices(); ++i)
      if (!ext.outer.node_on_boundary[i])
        CHECK(std::abs(rhs[i] - Av[i]) <= 1e-12 * scale);
  }
  SUBCASE("smooth compactly supported datum: matches the volume quadrature") {
    // bump (x(3-x))^2-type product, zero on the outer boundary [-1,2]^3
    ScalarField bump;
    bump.value = [](const Vec3& p) {
      auto b = [](double t) { return (t + 1.0) * (2.0 - t); };
      return b(p.x) * b(p.x) * b(p.y) * b(p.y) * b(p.z) * b(p.z) / 64.0;
    };
    bump.gradient = [](const Vec3& p) {
      auto b = [](double t) { return (t + 1.0) * (2.0 - t); };
      auto db = [](double t) { return 1.0 - 2.0 * t; };
      double fx = b(p.x) * b(p.x), fy = b(p.y) * b(p.y), fz = b(p.z) * b(p.z);
      return Vec3{2.0 * b(p.x) * db(p.x) * fy * fz,
                  fx * 2.0 * b(p.y) * db(p.y) * fz,
                  fx * fy * 2.0 * b(p.z) * db(p.z)} /
             64.0;
    };
    double coarse_gap = 0.0, fine_gap = 0.0;
    for (int n : {2, 4}) {
      TetMesh m = generate(spec, n);
      ExtendedMesh e = extend_to_box(m, spec, 1);
      auto rhs = aux_rhs_functional(e, bump);
      auto vol = gradient_load(e.outer, bump);
      double gap = 0.0, scale = 0.0;
      for (int i = 0; i < e.outer.num_vertices(); ++i) {
        if (e.outer.node_on_boundary[i]) continue;
        gap = std::max(gap, std::abs(rhs[i] - vol[i]));
        scale = std::max(scale, std::abs(vol[i]));
      }
      (n == 2 ? coarse_gap : fine_gap) = gap / scale;
    }
    CHECK(coarse_gap < 1e-2);
    CHECK(fine_gap < coarse_gap);  // sample-refinement convergence
  }
}

TEST_CASE("solve_aux") {
  DomainSpec spec = DomainSpec::preset("cube");
  TetMesh mesh = generate(spec, 2);
  ExtendedMesh ext = extend_to_box(mesh, spec, 1);
  SparseMatrix A = assemble_stiffness(ext.outer);

  SUBCASE("zero datum gives the zero field") {
    ScalarField zero;
    zero.value = [](const Vec3&) { return 0.0; };
    AuxResult aux = solve_aux(ext, zero);
    for (double v : aux.field.values) CHECK(v == 0.0);
  }
  SUBCASE("discrete datum is reproduced to solver tolerance") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    NodalField v;
    v.mesh = &ext.outer;
    v.values.resize(ext.outer.num_vertices());
    for (int i = 0; i < ext.outer.num_vertices(); ++i)
      v.values[i] = ext.outer.node_on_boundary[i] ? 0.0 : unif(rng);
    auto rhs = aux_rhs_functional(ext, v);
    AuxResult aux = solve_aux(ext, A, rhs, 1e-13);
    for (int i = 0; i < ext.outer.num_vertices(); ++i)
      CHECK(aux.field.values[i] == doctest::Approx(v.values[i]).epsilon(1e-8).scale(1.0));
  }
}

TEST_CASE("norms") {
  TetMesh mesh = generate(DomainSpec::preset("cube"), 1);
  SUBCASE("nodal max norm") {
    NodalField f;
    f.mesh = &mesh;
    f.values = {-3, 7, 2, 0, 0, 0, 0, 0};
    CHECK(linf_norm(f) == 7.0);
  }
  SUBCASE("W1inf seminorm of I_h(2x) is exactly 2") {
    ScalarField u;
    u.value = [](const Vec3& p) { return 2.0 * p.x; };
    NodalField f = interpolate(mesh, u);
    CHECK(w1inf_seminorm(mesh, f) == doctest::Approx(2.0).epsilon(1e-14));
  }
  SUBCASE("boundary sup of x on the cube is 1") {
    ScalarField u;
    u.value = [](const Vec3& p) { return p.x; };
    CHECK(boundary_linf(u, mesh) == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("zero extension and restriction round-trip") {
  DomainSpec spec = DomainSpec::preset("fichera");
  TetMesh mesh = generate(spec, 2);
  ExtendedMesh ext = extend_to_box(mesh, spec, 1);
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  NodalField f;
  f.mesh = &mesh;
  f.values.resize(mesh.num_vertices());
  for (double& v : f.values) v = unif(rng);
  NodalField outer = zero_extension(ext, f);
  NodalField back = restrict_to_omega(mesh, ext, outer);
  CHECK(back.values == f.values);
  double sum = 0.0;
  for (double v : outer.values) sum += std::abs(v);
  double omega_sum = 0.0;
  for (double v : f.values) omega_sum += std::abs(v);
  CHECK(sum == doctest::Approx(omega_sum));  // zeros elsewhere
}
