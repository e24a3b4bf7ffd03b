#include <benchmark/benchmark.h>

#include "rbd/channel.hpp"
#include "rbd/detect.hpp"
#include "rbd/sim.hpp"

namespace {

void BM_Preprocess(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const auto h = rbd::generate_channel(128, m, rbd::ChannelScenario::uncorrelated(), 1).h;
  const rbd::ComplexVector y(128);
  for (auto _ : state) benchmark::DoNotOptimize(rbd::preprocess(h, y, 0.1));
}

template <rbd::Detector D>
void BM_Detect(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const int k = static_cast<int>(state.range(1));
  const auto prob = rbd::random_mmse_problem(128, m, 0.1, 7);
  for (auto _ : state) benchmark::DoNotOptimize(rbd::detect(D, prob, k));
}

void BM_Trial(benchmark::State& state) {
  rbd::SimConfig c;
  c.m = static_cast<std::size_t>(state.range(0));
  c.detector = rbd::Detector::Cr;
  c.snr_db_list = {10.0};
  const rbd::LinkSimulator sim(c);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sim.run_trial(10.0, seed++));
}

}  // namespace

BENCHMARK(BM_Preprocess)->Arg(8)->Arg(16)->Arg(64);
BENCHMARK(BM_Detect<rbd::Detector::Cholesky>)->Args({8, 0})->Args({16, 0})->Args({64, 0});
BENCHMARK(BM_Detect<rbd::Detector::Minres>)->Args({8, 4})->Args({16, 4})->Args({64, 3});
BENCHMARK(BM_Detect<rbd::Detector::Gmres>)->Args({8, 4})->Args({16, 4})->Args({64, 3});
BENCHMARK(BM_Detect<rbd::Detector::Cr>)->Args({8, 4})->Args({16, 4})->Args({64, 3});
BENCHMARK(BM_Trial)->Arg(8)->Arg(16);
BENCHMARK_MAIN();
