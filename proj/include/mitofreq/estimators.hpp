#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mitofreq/profile.hpp"

namespace mitofreq {

/// Database-level counts for the rare-profile estimators.
struct ProfileCountSummary {
  std::int64_t n = 0;    // database size
  std::int64_t s = 0;    // profiles observed exactly once
  std::int64_t d = 0;    // profiles observed exactly twice
  std::int64_t k_q = 0;  // observations of the query profile
};

struct EstimateResult {
  std::string method;
  double match_probability = 0.0;
  double lr = 0.0;
};

/// Singleton/doubleton counts over canonical profile strings.
ProfileCountSummary summarize_profiles(std::span<const MitoProfile> profiles);

/// k_q / n. Requires 1 <= k_q <= n.
EstimateResult binomial_estimate(std::int64_t k_q, std::int64_t n);

/// (k_q + copies) / (n + copies), copies in {1, 2}.
EstimateResult augmented_estimate(std::int64_t k_q, std::int64_t n, int copies);

/// Exact one-sided upper limit: the Beta(k_q + 1, n - k_q) quantile at
/// `confidence`, found by bisection on the regularized incomplete beta.
EstimateResult clopper_pearson_upper(std::int64_t k_q, std::int64_t n, double confidence = 0.95);

/// Singleton-based kappa estimator for a new profile added to the database
/// as an extra singleton: (n - s) / (n + 1)^2.
EstimateResult brenner_estimate(std::int64_t n, std::int64_t s);

/// Generalized Good-Turing estimator: 2d / (n s).
EstimateResult cggt_estimate(std::int64_t n, std::int64_t s, std::int64_t d);

struct EstimatorArgs {
  std::optional<std::int64_t> n;
  std::optional<std::int64_t> s;
  std::optional<std::int64_t> d;
  std::optional<std::int64_t> k;
  double confidence = 0.95;
};

/// binomial, augmented1, augmented2, clopper-pearson, brenner, cggt
const std::vector<std::string>& estimator_methods();
bool is_estimator_method(std::string_view method);

/// Dispatch by method name. Missing arguments and unknown methods throw
/// DomainError; k defaults to 0 for the no-match methods.
EstimateResult run_estimator(std::string_view method, const EstimatorArgs& args);

}  // namespace mitofreq
