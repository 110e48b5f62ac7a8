#include <benchmark/benchmark.h>

#include "bihar/assembly.hpp"
#include "bihar/biharmonic.hpp"

using namespace bihar;

namespace {

void run_assembly(benchmark::State& state, SpaceKind kind, Form form, Exec exec) {
  const Mesh m = generate_structured(static_cast<int>(state.range(0)));
  const Space s = build_space(m, kind);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_bilinear(s, s, form, exec));
  state.counters["cells"] = m.num_cells();
}

void run_load(benchmark::State& state, Exec exec) {
  const Mesh m = generate_structured(static_cast<int>(state.range(0)));
  const Space s = build_space(m, SpaceKind::A3);
  const auto p = manufactured("sin2");
  for (auto _ : state) benchmark::DoNotOptimize(assemble_load(s, p.f, exec));
}

void run_errors(benchmark::State& state, Exec exec) {
  const Mesh m = generate_structured(static_cast<int>(state.range(0)));
  const Space s = build_space(m, SpaceKind::A3);
  const auto p = manufactured("sin2");
  const Eigen::VectorXd x = Eigen::VectorXd::Ones(s.num_dofs());
  for (auto _ : state) benchmark::DoNotOptimize(error_norms(s, x, p.exact(), exec));
}

void BM_hess_A3_serial(benchmark::State& s) { run_assembly(s, SpaceKind::A3, Form::hess_hess, Exec::serial); }
void BM_hess_A3_parallel(benchmark::State& s) { run_assembly(s, SpaceKind::A3, Form::hess_hess, Exec::parallel); }
void BM_grad_G3_serial(benchmark::State& s) { run_assembly(s, SpaceKind::G3, Form::grad_grad, Exec::serial); }
void BM_grad_G3_parallel(benchmark::State& s) { run_assembly(s, SpaceKind::G3, Form::grad_grad, Exec::parallel); }
void BM_load_serial(benchmark::State& s) { run_load(s, Exec::serial); }
void BM_load_parallel(benchmark::State& s) { run_load(s, Exec::parallel); }
void BM_errors_serial(benchmark::State& s) { run_errors(s, Exec::serial); }
void BM_errors_parallel(benchmark::State& s) { run_errors(s, Exec::parallel); }

}  // namespace

BENCHMARK(BM_hess_A3_serial)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_hess_A3_parallel)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_grad_G3_serial)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_grad_G3_parallel)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_load_serial)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_load_parallel)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_errors_serial)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_errors_parallel)->Arg(32)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
