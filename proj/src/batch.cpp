#include "mitofreq/batch.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include "mitofreq/error.hpp"

namespace mitofreq {

namespace {

// Exceptions must not escape an OpenMP region, so every item is wrapped.
template <typename T, typename F>
Outcome<T> guarded(F&& f) {
  Outcome<T> out;
  try {
    out.value = f();
  } catch (const ConfigError& e) {
    out.error = e.what();
    out.exit_code = 3;
  } catch (const std::exception& e) {
    out.error = e.what();
    out.exit_code = 2;
  }
  return out;
}

}  // namespace

std::vector<ClassifyOutcome> classify_serial(std::span<const MitoProfile> profiles,
                                             const MotifTable& table, ClassifierMode mode) {
  std::vector<ClassifyOutcome> out;
  out.reserve(profiles.size());
  for (const auto& p : profiles) {
    out.push_back(guarded<TlhgPrediction>([&] { return classify(p, table, mode); }));
  }
  return out;
}

std::vector<LrOutcome> evaluate_serial(std::span<const LrRequest> requests,
                                       const MotifTable& table) {
  std::vector<LrOutcome> out;
  out.reserve(requests.size());
  for (const auto& r : requests) {
    out.push_back(guarded<LrReport>([&] { return evaluate(r, table); }));
  }
  return out;
}

std::vector<ClassifyOutcome> classify_parallel(std::span<const MitoProfile> profiles,
                                               const MotifTable& table, ClassifierMode mode) {
  const auto n = static_cast<std::ptrdiff_t>(profiles.size());
  std::vector<ClassifyOutcome> out(profiles.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[i] = guarded<TlhgPrediction>([&] { return classify(profiles[i], table, mode); });
  }
  return out;
}

std::vector<LrOutcome> evaluate_parallel(std::span<const LrRequest> requests,
                                         const MotifTable& table) {
  const auto n = static_cast<std::ptrdiff_t>(requests.size());
  std::vector<LrOutcome> out(requests.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[i] = guarded<LrReport>([&] { return evaluate(requests[i], table); });
  }
  return out;
}

int batch_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace mitofreq
