#pragma once

// JSON wire format shared by the CLI (--format json) and the HTTP service.

#include <nlohmann/json.hpp>

#include "mitofreq/estimators.hpp"
#include "mitofreq/freqdb.hpp"
#include "mitofreq/haplogroup.hpp"
#include "mitofreq/lr_engine.hpp"

namespace mitofreq {

using Json = nlohmann::json;

void to_json(Json& j, const TlhgPrediction& p);
void from_json(const Json& j, TlhgPrediction& p);

/// Flat record: headline fields, then rank1_* and rank2_* breakdowns.
void to_json(Json& j, const LrReport& r);
void from_json(const Json& j, LrReport& r);

void to_json(Json& j, const EstimateResult& e);
void from_json(const Json& j, EstimateResult& e);

void to_json(Json& j, const TlhgDistribution& d);
void from_json(const Json& j, TlhgDistribution& d);

void to_json(Json& j, const ComparisonReport& c);
void to_json(Json& j, const ProfileCountSummary& s);
void to_json(Json& j, const IngestReport& r);

/// Serialized form used on the wire and by the CLI: two-space indent,
/// trailing newline.
std::string to_wire(const Json& j);

/// Source name, TLHG count, total n and per-TLHG sizes.
Json describe_source(const SnvFrequencyDb& db);

}  // namespace mitofreq
