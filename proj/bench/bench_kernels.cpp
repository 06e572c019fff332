// Serial reference kernels against their OpenMP counterparts.
//   ./bench_kernels --benchmark_counters_tabular=true

#include <benchmark/benchmark.h>

#include <random>
#include <set>

#include "mitofreq/batch.hpp"

using namespace mitofreq;

namespace {

const RcrsReference& ref() { return RcrsReference::bundled(); }
const MotifTable& table() { return MotifTable::bundled(); }

// Motif profiles with a few private substitutions.
std::vector<MitoProfile> profiles(std::size_t count) {
  std::mt19937_64 rng(1);
  std::vector<MitoProfile> out;
  const auto& motifs = table().motifs();
  while (out.size() < count) {
    const auto& m = motifs[rng() % motifs.size()];
    auto vs = m.variants;
    for (int k = 0; k < 5; ++k) {
      int p = 1 + static_cast<int>(rng() % kMitogenomeLength);
      if (table().positions().contains(p) || ref().base_at(p) == 'N') continue;
      bool taken = false;
      for (const auto& v : vs) taken = taken || v.position == p;
      if (!taken) vs.push_back(Variant::substitution(p, ref().base_at(p) == 'A' ? 'G' : 'A'));
    }
    out.push_back(MitoProfile::create(vs, Coverage::full(), ref()));
  }
  return out;
}

// Source holding every motif substitution in every TLHG.
const SnvFrequencyDb& source() {
  static const SnvFrequencyDb db = [] {
    std::mt19937_64 rng(2);
    std::map<std::string, std::int64_t> sizes;
    for (const auto& t : table().tlhgs()) sizes[t] = 1000 + static_cast<std::int64_t>(rng() % 20000);
    std::vector<SnvRecord> recs;
    std::set<std::pair<int, char>> seen;
    for (const auto& m : table().motifs()) {
      for (const auto& v : m.variants) {
        if (v.kind != VariantKind::substitution || !seen.insert({v.position, v.base}).second) continue;
        for (const auto& [t, n] : sizes) {
          recs.push_back({v.position, ref().base_at(v.position), v.base, t, 1 + static_cast<std::int64_t>(rng() % n), true});
        }
      }
    }
    return SnvFrequencyDb::create("bench", recs, sizes);
  }();
  return db;
}

std::vector<LrRequest> requests(std::size_t count) {
  std::vector<LrRequest> out;
  auto dist = tlhg_distribution(source());
  for (auto& p : profiles(count)) {
    LrRequest r;
    r.profile = std::move(p);
    r.snv_sources = {source()};
    r.tlhg_dist = dist;
    out.push_back(std::move(r));
  }
  return out;
}

template <auto Kernel>
void classify_batch(benchmark::State& state) {
  auto ps = profiles(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(ps, table(), ClassifierMode::full));
  state.SetItemsProcessed(state.iterations() * state.range(0));
  state.counters["threads"] = batch_threads();
}

template <auto Kernel>
void evaluate_batch(benchmark::State& state) {
  auto rs = requests(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(rs, table()));
  state.SetItemsProcessed(state.iterations() * state.range(0));
  state.counters["threads"] = batch_threads();
}

}  // namespace

BENCHMARK(classify_batch<classify_serial>)->Name("classify/serial")->Arg(256)->Arg(4096);
BENCHMARK(classify_batch<classify_parallel>)->Name("classify/parallel")->Arg(256)->Arg(4096)->UseRealTime();
BENCHMARK(evaluate_batch<evaluate_serial>)->Name("evaluate/serial")->Arg(256)->Arg(4096);
BENCHMARK(evaluate_batch<evaluate_parallel>)->Name("evaluate/parallel")->Arg(256)->Arg(4096)->UseRealTime();

BENCHMARK_MAIN();
