#include "mitofreq/lr_engine.hpp"

#include <algorithm>
#include <deque>

namespace mitofreq {

std::string_view to_string(RankPolicy policy) {
  return policy == RankPolicy::rank1_only ? "rank1_only" : "min_of_rank1_rank2";
}

RankPolicy rank_policy_from_string(std::string_view s) {
  if (s == "rank1_only" || s == "rank1") return RankPolicy::rank1_only;
  if (s == "min_of_rank1_rank2" || s == "min") return RankPolicy::min_of_rank1_rank2;
  throw DomainError("unknown rank policy '" + std::string(s) +
                    "' (expected rank1_only or min_of_rank1_rank2)");
}

std::optional<SnvChoice> rarest_snv(const MitoProfile& profile, std::span<const DbRef> sources,
                                    const std::string& tlhg) {
  if (sources.empty()) throw DomainError("no SNV source given");
  bool known = std::any_of(sources.begin(), sources.end(),
                           [&](const SnvFrequencyDb& db) { return db.has_tlhg(tlhg); });
  if (!known) return std::nullopt;

  std::optional<SnvChoice> best;
  // substitutions() is already ordered by (position, base), so a strict
  // comparison keeps the first of equally rare SNVs.
  for (const auto& sub : substitutions(profile)) {
    auto freq = pooled_frequency(sources, sub.position, sub.base, tlhg);
    if (!freq) continue;
    if (!best || *freq < best->frequency) best = SnvChoice{sub.position, sub.base, *freq};
  }
  return best;
}

RankEvaluation evaluate_rank(const MitoProfile& profile, std::span<const DbRef> sources,
                             const TlhgDistribution& dist, const std::string& tlhg, int rank,
                             bool allow_fallback) {
  RankEvaluation ev;
  ev.rank = rank;
  ev.tlhg = tlhg;
  ev.tlhg_prob = dist.prob(tlhg);
  if (!(ev.tlhg_prob > 0.0)) {
    ev.note = "TLHG " + tlhg + " has zero probability in distribution " + dist.source_name;
    return ev;
  }

  bool known = std::any_of(sources.begin(), sources.end(),
                           [&](const SnvFrequencyDb& db) { return db.has_tlhg(tlhg); });
  ev.snv = rarest_snv(profile, sources, tlhg);
  if (ev.snv) {
    ev.snv_prob = ev.snv->frequency;
  } else {
    if (!allow_fallback) {
      ev.note = "no profile SNV observed in TLHG " + tlhg + " and fallback is disabled";
      return ev;
    }
    ev.fallback = true;
    ev.snv_prob = 1.0;
    ev.note = known ? "no profile SNV observed in TLHG " + tlhg
                    : "TLHG " + tlhg + " is missing from the SNV source";
  }
  ev.match_probability = ev.tlhg_prob * ev.snv_prob;
  ev.lr = 1.0 / ev.tlhg_prob / ev.snv_prob;
  ev.usable = true;
  return ev;
}

namespace {

std::vector<std::string> source_names(std::span<const DbRef> sources) {
  std::vector<std::string> names;
  for (const SnvFrequencyDb& db : sources) names.push_back(db.source_name());
  return names;
}

LrReport evaluate_sources(const LrRequest& request, std::span<const DbRef> sources,
                          const std::optional<TlhgPrediction>& prediction) {
  LrReport report;
  report.profile = format_profile(request.profile);
  report.coverage = request.profile.coverage().to_string();
  report.sources = source_names(sources);
  report.pooled = sources.size() > 1;
  report.tlhg_source = request.tlhg_dist.source_name;
  report.classifier_mode = request.classifier_mode;
  report.rank_policy = request.rank_policy;
  report.software_version = MITOFREQ_VERSION;

  if (request.tlhg_override) {
    report.tlhg_overridden = true;
    report.rank1 = evaluate_rank(request.profile, sources, request.tlhg_dist,
                                 *request.tlhg_override, 1, request.allow_fallback);
  } else {
    report.rank1 = evaluate_rank(request.profile, sources, request.tlhg_dist, prediction->rank1,
                                 1, request.allow_fallback);
    if (!prediction->rank2.empty()) {
      report.rank2 = evaluate_rank(request.profile, sources, request.tlhg_dist,
                                   prediction->rank2, 2, request.allow_fallback);
    }
  }

  const RankEvaluation* used = nullptr;
  if (request.rank_policy == RankPolicy::rank1_only || !report.rank2) {
    if (!report.rank1.usable) throw DomainError("rank 1: " + report.rank1.note);
    used = &report.rank1;
  } else {
    const auto& r1 = report.rank1;
    const auto& r2 = *report.rank2;
    if (!r1.usable && !r2.usable) {
      throw DomainError("no usable TLHG: rank 1: " + r1.note + "; rank 2: " + r2.note);
    }
    if (!r1.usable) {
      used = &r2;
    } else if (!r2.usable) {
      used = &r1;
    } else {
      used = r2.lr < r1.lr ? &r2 : &r1;
    }
    for (const auto* r : {&r1, &r2}) {
      if (!r->usable) report.warnings.push_back("rank " + std::to_string(r->rank) + " skipped: " + r->note);
    }
    if (r1.usable && r2.usable && r1.fallback && r2.fallback) {
      report.warnings.push_back("both ranks fell back to the TLHG frequency; minimum LR taken");
    }
  }
  if (used->fallback) report.warnings.push_back("fallback: " + used->note);

  report.rank_used = used->rank;
  report.tlhg_used = used->tlhg;
  report.tlhg_prob = used->tlhg_prob;
  report.chosen_snv = used->snv;
  report.snv_prob = used->snv_prob;
  report.match_probability = used->match_probability;
  report.lr = used->lr;
  report.fallback_used = used->fallback;
  return report;
}

std::optional<TlhgPrediction> predict(const LrRequest& request, const MotifTable& table) {
  if (request.tlhg_override) return std::nullopt;
  return classify(request.profile, table, request.classifier_mode);
}

}  // namespace

LrReport evaluate(const LrRequest& request, const MotifTable& table) {
  if (request.snv_sources.empty()) throw DomainError("at least one SNV source is required");
  if (request.snv_sources.size() > 1 && !request.pool) {
    throw DomainError("several SNV sources given without pooling; pool them or evaluate per source");
  }
  return evaluate_sources(request, request.snv_sources, predict(request, table));
}

std::vector<LrReport> evaluate_per_source(const LrRequest& request, const MotifTable& table) {
  if (request.snv_sources.empty()) throw DomainError("at least one SNV source is required");
  auto prediction = predict(request, table);
  std::vector<LrReport> out;
  for (const auto& src : request.snv_sources) {
    out.push_back(evaluate_sources(request, std::span<const DbRef>(&src, 1), prediction));
  }
  if (request.snv_sources.size() > 1) {
    out.push_back(evaluate_sources(request, request.snv_sources, prediction));
  }
  return out;
}

SingleSampleLr single_sample_lr(std::int64_t n, std::int64_t n_g, std::int64_t m_g) {
  if (m_g == 0) throw DomainError("SNV unobserved in the subdivision (m_G = 0)");
  if (!(1 <= m_g && m_g <= n_g && n_g <= n)) {
    throw DomainError("single-sample LR needs 1 <= m_G <= n_G <= n");
  }
  return {static_cast<double>(m_g) / static_cast<double>(n),
          static_cast<double>(n) / static_cast<double>(m_g)};
}

SubdivisionDag::SubdivisionDag(std::vector<std::string> labels,
                               const std::vector<std::pair<std::string, std::string>>& child_parent)
    : labels_(std::move(labels)) {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (!ids_.emplace(labels_[i], i).second) {
      throw DomainError("duplicate subdivision label '" + labels_[i] + "'");
    }
  }
  const std::size_t n = labels_.size();
  std::vector<std::vector<std::size_t>> parents(n);
  for (const auto& [child, parent] : child_parent) parents[index(child)].push_back(index(parent));

  closure_.assign(n, std::vector<char>(n, 0));
  for (std::size_t h = 0; h < n; ++h) {
    std::deque<std::size_t> queue{h};
    closure_[h][h] = 1;
    while (!queue.empty()) {
      auto v = queue.front();
      queue.pop_front();
      for (auto p : parents[v]) {
        if (p == h) throw DomainError("subdivision graph has a cycle through '" + labels_[h] + "'");
        if (!closure_[h][p]) {
          closure_[h][p] = 1;
          queue.push_back(p);
        }
      }
    }
  }
}

std::size_t SubdivisionDag::index(std::string_view label) const {
  auto it = ids_.find(label);
  if (it == ids_.end()) throw DomainError("unknown subdivision '" + std::string(label) + "'");
  return it->second;
}

bool SubdivisionDag::is_refinement(std::string_view h, std::string_view g) const {
  return is_refinement(index(h), index(g));
}

}  // namespace mitofreq
