#include <memory>

#include <benchmark/benchmark.h>

#include "oseen_ale/ale_map.hpp"
#include "oseen_ale/assembly.hpp"
#include "oseen_ale/fe_space.hpp"
#include "oseen_ale/mesh.hpp"
#include "oseen_ale/motion.hpp"
#include "oseen_ale/problems.hpp"
#include "oseen_ale/timestepper.hpp"
#include "oseen_ale/vms.hpp"

namespace {

using namespace oseen_ale;

std::shared_ptr<const ReferenceMesh> square(int n) {
  return std::make_shared<const ReferenceMesh>(make_unit_square(n, n));
}

DiscreteAleMap expanding_map(const std::shared_ptr<const ReferenceMesh>& mesh, int steps) {
  return DiscreteAleMap::build(mesh, expansion_motion(0.2), TimeGrid{0.0, 1.0 / steps, steps});
}

void BM_AssembleMass(benchmark::State& state) {
  const auto mesh = square(static_cast<int>(state.range(0)));
  const auto map = expanding_map(mesh, 4);
  const FunctionSpace space(mesh, SpaceKind::Velocity);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_mass(space, map, 0.3));
}
BENCHMARK(BM_AssembleMass)->Arg(8)->Arg(16)->Arg(32);

void BM_AssembleConvection(benchmark::State& state) {
  const auto mesh = square(static_cast<int>(state.range(0)));
  const auto map = expanding_map(mesh, 4);
  const FunctionSpace space(mesh, SpaceKind::Velocity);
  const auto w = map.mesh_velocity(1);
  const Configuration config = map.configuration(0.375);
  const Advector a = relative_advector(rotation_field(), 0.375, &w, config);
  for (auto _ : state) {
    benchmark::DoNotOptimize(assemble_convection(space, config, a, ConvectionForm::Conservative));
  }
}
BENCHMARK(BM_AssembleConvection)->Arg(8)->Arg(16)->Arg(32);

void BM_FineScaleDiffusion(benchmark::State& state) {
  const auto mesh = square(static_cast<int>(state.range(0)));
  const auto map = expanding_map(mesh, 4);
  const FunctionSpace space(mesh, SpaceKind::Velocity);
  const CoarseProjector projector = build_projector(space, map, 0.375);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_fine_scale_diffusion(projector, 0.01, space));
}
BENCHMARK(BM_FineScaleDiffusion)->Arg(8)->Arg(16);

void BM_GclResidual(benchmark::State& state) {
  const auto mesh = square(8);
  const auto map = expanding_map(mesh, 10);
  const auto pairs = sample_basis_pairs(*mesh, 50, 0);
  const TimeQuadrature rule = TimeQuadrature::midpoint();
  for (auto _ : state) benchmark::DoNotOptimize(max_gcl_residual(map, pairs, rule));
}
BENCHMARK(BM_GclResidual);

void BM_TimeStep(benchmark::State& state) {
  const auto mesh = square(static_cast<int>(state.range(0)));
  SchemeConfig cfg;
  cfg.mu_T = 0.01;
  cfg.dt = 0.05;
  cfg.n_steps = 4;
  cfg.variant = state.range(1) == 0 ? SchemeVariant::GclMidpoint : SchemeVariant::Endpoint;
  auto map = std::make_shared<const DiscreteAleMap>(
      DiscreteAleMap::build(mesh, expansion_motion(0.2), cfg.grid()));
  const TimeStepper stepper(cfg, map, make_problem("forced", cfg.mu));
  const TimeStepReport init = stepper.initial_report();
  for (auto _ : state) benchmark::DoNotOptimize(stepper.step(0, init.velocity));
}
BENCHMARK(BM_TimeStep)->Args({8, 0})->Args({8, 1})->Args({16, 0})->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
