#include <benchmark/benchmark.h>

#include <sstream>
#include <string>

#include "strato/batch.hpp"
#include "strato/crocco.hpp"
#include "strato/limit.hpp"
#include "strato/thermo.hpp"
#include "strato/transform.hpp"

using namespace strato;

namespace {

thermo::FreeStream stream(double U) {
  thermo::FreeStreamInputs in;
  in.U = U;
  in.T0 = 300.0;
  in.p0 = 101325.0;
  in.L = 1e5;
  in.h = 1e3;
  return thermo::FreeStream(in, thermo::paper_atmosphere().dry);
}

void BM_TauStar(benchmark::State& state) {
  const auto g = thermo::paper_atmosphere().dry;
  double U = 10.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(limit::tau_star(U, 1000.0, g, 300.0));
    benchmark::ClobberMemory();
  }
}
BENCHMARK(BM_TauStar);

void BM_Shooting(benchmark::State& state) {
  const crocco::CroccoProblem prob{1.0, 5.0, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(crocco::solve_shooting(prob, 1e-10, 201).tau_wall);
}
BENCHMARK(BM_Shooting)->Unit(benchmark::kMillisecond);

void BM_FdNewton(benchmark::State& state) {
  const crocco::CroccoProblem prob{1.0, 5.0, 1.0};
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(crocco::solve_fd_newton(prob, n).tau_wall);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FdNewton)->RangeMultiplier(4)->Range(256, 16384)->Unit(benchmark::kMillisecond)->Complexity();

void BM_BuildMap(benchmark::State& state) {
  const auto g = thermo::paper_atmosphere().dry;
  const auto fs = stream(10.0);
  const auto dc = thermo::derived_constants(fs, g);
  const auto nx = static_cast<std::size_t>(state.range(0));
  const auto p = ScalarField::sample(nx, nx / 4 + 1, fs.L(), fs.h(),
                                     [&](double, double) { return dc.c1 * fs.sigma0(); });
  const auto rho = ScalarField::sample(nx, nx / 4 + 1, fs.L(), fs.h(), [&](double, double y) {
    return thermo::density_of_u(fs.U() * y / fs.h(), dc, fs);
  });
  for (auto _ : state) benchmark::DoNotOptimize(transform::build_map(p, rho, dc, fs));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(p.nx() * p.ny()));
}
BENCHMARK(BM_BuildMap)->Arg(129)->Arg(513)->Arg(2049);

void BM_Batch(benchmark::State& state) {
  std::string csv = "station_id,p0,T0,U,h,q\n";
  for (int k = 0; k < state.range(0); ++k)
    csv += "S" + std::to_string(k) + ",101325," + std::to_string(260 + k % 50) + "," +
           std::to_string(1 + k % 40) + ",1000,0.01\n";
  std::istringstream is(csv);
  const auto parsed = batch::parse_soundings(is);
  const auto gas = thermo::paper_atmosphere();
  for (auto _ : state) {
    const auto rep = batch::run_batch(parsed, gas, {});
    std::ostringstream os;
    batch::write_csv(os, rep);
    benchmark::DoNotOptimize(os.str().size());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Batch)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
