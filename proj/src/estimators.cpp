#include "mitofreq/estimators.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "mitofreq/error.hpp"

namespace mitofreq {

namespace {

EstimateResult make_result(std::string method, double p) {
  p = std::clamp(p, std::numeric_limits<double>::min(), 1.0);
  return {std::move(method), p, 1.0 / p};
}

}  // namespace

ProfileCountSummary summarize_profiles(std::span<const MitoProfile> profiles) {
  std::unordered_map<std::string, std::int64_t> counts;
  for (const auto& p : profiles) {
    auto key = format_profile(p);
    // Profiles with different interpretation ranges are different strings.
    if (!(p.coverage() == Coverage::full())) key += " @" + p.coverage().to_string();
    ++counts[key];
  }
  ProfileCountSummary out;
  out.n = static_cast<std::int64_t>(profiles.size());
  for (const auto& [key, c] : counts) {
    if (c == 1) ++out.s;
    if (c == 2) ++out.d;
  }
  return out;
}

EstimateResult binomial_estimate(std::int64_t k_q, std::int64_t n) {
  if (k_q == 0) throw DomainError("binomial estimator undefined for k_q = 0; use a no-match method");
  if (k_q < 0 || n < 1 || k_q > n) throw DomainError("binomial estimator needs 1 <= k_q <= n");
  return make_result("binomial", static_cast<double>(k_q) / static_cast<double>(n));
}

EstimateResult augmented_estimate(std::int64_t k_q, std::int64_t n, int copies) {
  if (copies != 1 && copies != 2) throw DomainError("augmented estimator takes 1 or 2 copies");
  if (k_q < 0 || n < 0 || k_q > n) throw DomainError("augmented estimator needs 0 <= k_q <= n");
  return make_result("augmented" + std::to_string(copies),
                     static_cast<double>(k_q + copies) / static_cast<double>(n + copies));
}

EstimateResult clopper_pearson_upper(std::int64_t k_q, std::int64_t n, double confidence) {
  if (n < 1 || k_q < 0 || k_q > n) throw DomainError("Clopper-Pearson needs 0 <= k_q <= n, n >= 1");
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw DomainError("confidence must lie in (0, 1)");
  }
  if (k_q == n) return make_result("clopper-pearson", 1.0);

  // P(Bin(n, p) <= k) = 1 - I_p(k + 1, n - k); the upper limit solves
  // I_p(k + 1, n - k) = confidence, increasing in p.
  const double a = static_cast<double>(k_q + 1);
  const double b = static_cast<double>(n - k_q);
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > 1e-12) {
    double mid = 0.5 * (lo + hi);
    if (boost::math::ibeta(a, b, mid) < confidence) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return make_result("clopper-pearson", 0.5 * (lo + hi));
}

EstimateResult brenner_estimate(std::int64_t n, std::int64_t s) {
  if (n < 1 || s < 0 || s > n) throw DomainError("Brenner estimator needs n >= 1, 0 <= s <= n");
  if (s == n) throw DomainError("Brenner estimator undefined when every profile is a singleton");
  const double np1 = static_cast<double>(n) + 1.0;
  return make_result("brenner", static_cast<double>(n - s) / (np1 * np1));
}

EstimateResult cggt_estimate(std::int64_t n, std::int64_t s, std::int64_t d) {
  if (n < 1) throw DomainError("CGGT estimator needs n >= 1");
  if (s <= 0 || d <= 0) throw DomainError("CGGT estimator undefined without singletons and doubletons");
  if (s + 2 * d > n) throw DomainError("CGGT estimator needs s + 2d <= n");
  return make_result("cggt", 2.0 * static_cast<double>(d) /
                                 (static_cast<double>(n) * static_cast<double>(s)));
}

const std::vector<std::string>& estimator_methods() {
  static const std::vector<std::string> methods{"binomial", "augmented1", "augmented2",
                                                "clopper-pearson", "brenner", "cggt"};
  return methods;
}

bool is_estimator_method(std::string_view method) {
  const auto& m = estimator_methods();
  return std::find(m.begin(), m.end(), method) != m.end();
}

namespace {

std::int64_t need(const std::optional<std::int64_t>& v, const char* name, std::string_view method) {
  if (!v) throw DomainError(std::string(method) + " needs argument " + name);
  return *v;
}

}  // namespace

EstimateResult run_estimator(std::string_view method, const EstimatorArgs& a) {
  if (method == "binomial") return binomial_estimate(need(a.k, "k", method), need(a.n, "n", method));
  if (method == "augmented1" || method == "augmented2") {
    return augmented_estimate(a.k.value_or(0), need(a.n, "n", method), method.back() - '0');
  }
  if (method == "clopper-pearson") {
    return clopper_pearson_upper(a.k.value_or(0), need(a.n, "n", method), a.confidence);
  }
  if (method == "brenner") return brenner_estimate(need(a.n, "n", method), need(a.s, "s", method));
  if (method == "cggt") {
    return cggt_estimate(need(a.n, "n", method), need(a.s, "s", method), need(a.d, "d", method));
  }
  throw DomainError("unknown estimator method '" + std::string(method) + "'");
}

}  // namespace mitofreq
