#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mitofreq/haplogroup.hpp"
#include "mitofreq/lr_engine.hpp"

namespace mitofreq {

/// Result slot for one batch item. Exactly one of value / error is set.
template <typename T>
struct Outcome {
  std::optional<T> value;
  std::string error;
  int exit_code = 0;  // 2 domain, 3 config; 0 on success

  bool ok() const { return value.has_value(); }
};

using ClassifyOutcome = Outcome<TlhgPrediction>;
using LrOutcome = Outcome<LrReport>;

// Serial reference kernels. Output order equals input order.
std::vector<ClassifyOutcome> classify_serial(std::span<const MitoProfile> profiles,
                                             const MotifTable& table, ClassifierMode mode);
std::vector<LrOutcome> evaluate_serial(std::span<const LrRequest> requests,
                                       const MotifTable& table);

// OpenMP kernels. Same results as the serial ones, item for item.
std::vector<ClassifyOutcome> classify_parallel(std::span<const MitoProfile> profiles,
                                               const MotifTable& table, ClassifierMode mode);
std::vector<LrOutcome> evaluate_parallel(std::span<const LrRequest> requests,
                                         const MotifTable& table);

/// Threads OpenMP would use for the parallel kernels (1 without OpenMP).
int batch_threads();

}  // namespace mitofreq
