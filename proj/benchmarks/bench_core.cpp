#include <benchmark/benchmark.h>

#include <random>

#include "ritzlab/fem.hpp"
#include "ritzlab/mesh.hpp"
#include "ritzlab/sparse.hpp"

using namespace ritzlab;

static void BM_GenerateFichera(benchmark::State& state) {
  DomainSpec spec = DomainSpec::preset("fichera");
  int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    TetMesh mesh = generate(spec, n);
    benchmark::DoNotOptimize(mesh.tets.data());
  }
  state.SetItemsProcessed(state.iterations() * 42LL * n * n * n);
}
BENCHMARK(BM_GenerateFichera)->Arg(4)->Arg(8)->Arg(16);

static void BM_AuditFichera(benchmark::State& state) {
  TetMesh mesh = generate(DomainSpec::preset("fichera"),
                          static_cast<int>(state.range(0)));
  for (auto _ : state) {
    DihedralReport rep = audit_non_obtuse(mesh);
    benchmark::DoNotOptimize(rep.global_max);
  }
  state.SetItemsProcessed(state.iterations() * mesh.num_tets());
}
BENCHMARK(BM_AuditFichera)->Arg(4)->Arg(8)->Arg(16);

static void BM_AssembleFichera(benchmark::State& state) {
  TetMesh mesh = generate(DomainSpec::preset("fichera"),
                          static_cast<int>(state.range(0)));
  for (auto _ : state) {
    SparseMatrix A = assemble_stiffness(mesh);
    benchmark::DoNotOptimize(A.val.data());
  }
  state.SetItemsProcessed(state.iterations() * mesh.num_tets());
}
BENCHMARK(BM_AssembleFichera)->Arg(4)->Arg(8)->Arg(16);

static void BM_CgSolve(benchmark::State& state) {
  TetMesh mesh = generate(DomainSpec::preset("fichera"),
                          static_cast<int>(state.range(0)));
  SparseMatrix A = assemble_stiffness(mesh);
  SparseMatrix A_int = restrict_to(A, mesh.interior_nodes());
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<double> b(A_int.n);
  for (double& v : b) v = unif(rng);
  for (auto _ : state) {
    auto [x, stats] = cg_solve(A_int, b, 1e-10);
    benchmark::DoNotOptimize(x.data());
    benchmark::DoNotOptimize(stats.iterations);
  }
}
BENCHMARK(BM_CgSolve)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
