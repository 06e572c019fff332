#pragma once

#include <concepts>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mitofreq/error.hpp"
#include "mitofreq/freqdb.hpp"
#include "mitofreq/haplogroup.hpp"
#include "mitofreq/profile.hpp"

namespace mitofreq {

enum class RankPolicy { rank1_only, min_of_rank1_rank2 };

std::string_view to_string(RankPolicy policy);
RankPolicy rank_policy_from_string(std::string_view s);

struct SnvChoice {
  int position = 0;
  char alt = '\0';
  double frequency = 0.0;

  std::string to_string() const { return std::to_string(position) + alt; }
  friend bool operator==(const SnvChoice&, const SnvChoice&) = default;
};

/// Breakdown for one predicted TLHG.
struct RankEvaluation {
  int rank = 1;
  std::string tlhg;
  double tlhg_prob = 0.0;
  std::optional<SnvChoice> snv;
  double snv_prob = 1.0;
  double match_probability = 0.0;
  double lr = 0.0;
  bool fallback = false;
  bool usable = false;  // false when the rank cannot produce a finite LR
  std::string note;

  friend bool operator==(const RankEvaluation&, const RankEvaluation&) = default;
};

struct LrRequest {
  MitoProfile profile;
  std::vector<DbRef> snv_sources;
  bool pool = false;
  TlhgDistribution tlhg_dist;
  ClassifierMode classifier_mode = ClassifierMode::full;
  RankPolicy rank_policy = RankPolicy::min_of_rank1_rank2;
  bool allow_fallback = true;
  /// Skip classification and evaluate this TLHG only.
  std::optional<std::string> tlhg_override;
};

struct LrReport {
  std::string profile;
  std::string coverage;
  std::vector<std::string> sources;
  bool pooled = false;
  std::string tlhg_source;
  ClassifierMode classifier_mode = ClassifierMode::full;
  RankPolicy rank_policy = RankPolicy::min_of_rank1_rank2;
  bool tlhg_overridden = false;

  int rank_used = 1;
  std::string tlhg_used;
  double tlhg_prob = 0.0;
  std::optional<SnvChoice> chosen_snv;
  double snv_prob = 1.0;
  double match_probability = 0.0;
  double lr = 0.0;
  bool fallback_used = false;

  RankEvaluation rank1;
  std::optional<RankEvaluation> rank2;
  std::vector<std::string> warnings;
  std::string software_version;

  friend bool operator==(const LrReport&, const LrReport&) = default;
};

/// Rarest in-TLHG profile SNV across the sources (pooled when more than one
/// source is given). Ties go to the lowest position, then the alt base.
/// nullopt when no profile SNV is recorded in the TLHG, or no source knows it.
std::optional<SnvChoice> rarest_snv(const MitoProfile& profile, std::span<const DbRef> sources,
                                    const std::string& tlhg);

/// Evaluate one TLHG: LR = 1 / (P(TLHG) * p(rarest SNV | TLHG)).
RankEvaluation evaluate_rank(const MitoProfile& profile, std::span<const DbRef> sources,
                             const TlhgDistribution& dist, const std::string& tlhg, int rank,
                             bool allow_fallback);

/// Classify, evaluate the predicted ranks and apply the rank policy.
/// Several sources require `pool`; see evaluate_per_source for columns.
LrReport evaluate(const LrRequest& request, const MotifTable& table);

/// One report per source, then a pooled report when there are several.
std::vector<LrReport> evaluate_per_source(const LrRequest& request, const MotifTable& table);

// Refinement monotonicity --------------------------------------------------

struct SingleSampleLr {
  double match_probability = 0.0;
  double lr = 0.0;
};

/// Both frequencies from one sample of size n: (n_G/n)(m_G/n_G) = m_G/n.
SingleSampleLr single_sample_lr(std::int64_t n, std::int64_t n_g, std::int64_t m_g);

/// Anything that can answer "is h a refinement of g".
template <typename D>
concept RefinementDag = requires(const D& dag, std::string_view h, std::string_view g) {
  { dag.is_refinement(h, g) } -> std::convertible_to<bool>;
};

/// A labelled DAG of subdivisions with a precomputed ancestor closure.
/// Edges run child -> parent.
class SubdivisionDag {
 public:
  SubdivisionDag(std::vector<std::string> labels,
                 const std::vector<std::pair<std::string, std::string>>& child_parent);

  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t index(std::string_view label) const;
  bool is_refinement(std::string_view h, std::string_view g) const;
  bool is_refinement(std::size_t h, std::size_t g) const { return closure_[h][g] != 0; }

 private:
  std::vector<std::string> labels_;
  std::map<std::string, std::size_t, std::less<>> ids_;
  std::vector<std::vector<char>> closure_;  // closure_[h][g]: g is an ancestor of h
};

struct SampleMember {
  std::string label;  // finest subdivision the individual belongs to
  bool has_snv = false;
};

struct RefinementCheck {
  double lr_g = 0.0;
  double lr_h = 0.0;
  std::int64_t n = 0;
  std::int64_t n_g = 0;
  std::int64_t m_g = 0;
  std::int64_t n_h = 0;
  std::int64_t m_h = 0;
  bool monotone = false;
};

/// Counts the sample against subdivisions G and H (H must refine G) and
/// compares the two single-sample LRs.
template <RefinementDag D>
RefinementCheck refinement_check(std::span<const SampleMember> sample, std::string_view g,
                                 std::string_view h, const D& dag) {
  if (!dag.is_refinement(h, g)) {
    throw DomainError("'" + std::string(h) + "' is not a refinement of '" + std::string(g) + "'");
  }
  RefinementCheck out;
  out.n = static_cast<std::int64_t>(sample.size());
  for (const auto& member : sample) {
    if (dag.is_refinement(member.label, g)) {
      ++out.n_g;
      if (member.has_snv) ++out.m_g;
    }
    if (dag.is_refinement(member.label, h)) {
      ++out.n_h;
      if (member.has_snv) ++out.m_h;
    }
  }
  if (out.m_h == 0) throw DomainError("SNV not observed in '" + std::string(h) + "'");
  out.lr_g = single_sample_lr(out.n, out.n_g, out.m_g).lr;
  out.lr_h = single_sample_lr(out.n, out.n_h, out.m_h).lr;
  out.monotone = out.lr_h >= out.lr_g;
  return out;
}

}  // namespace mitofreq
