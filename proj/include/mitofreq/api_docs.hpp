#pragma once

// Machine-readable descriptions of the JSON wire format. docs/ holds the
// rendered copies (`mitofreq docs --out docs`); a test keeps them in sync.

#include <filesystem>
#include <map>
#include <string>

#include "mitofreq/report_json.hpp"

namespace mitofreq {

/// JSON Schemas keyed by name: lr_report, tlhg_prediction, estimate_result,
/// tlhg_distribution, source, error.
const std::map<std::string, Json>& json_schemas();

/// OpenAPI 3 description of the service, embedding the schemas above.
Json openapi_document();

/// Write openapi.json and <name>.schema.json files into dir.
void write_api_docs(const std::filesystem::path& dir);

}  // namespace mitofreq
