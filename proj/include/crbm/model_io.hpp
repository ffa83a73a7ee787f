#pragma once

#include <string>

#include "crbm/model.hpp"
#include "crbm/schema.hpp"

namespace crbm::io {

/// Versioned binary model file: fixed header (magic, format version, schema
/// hash, layout numbers), then little-endian double arrays in a documented
/// order (weights column-major, visible fields, visible log scales, hidden
/// locations, hidden log scales), then a checksum. A human-readable JSON
/// sidecar is written next to it as <path>.meta.json.
void save_model(const std::string& path, const CrbmParams& params,
                const cohort::CohortSchema& schema,
                const std::string& provenance_json = "{}");

/// Loads and validates against the schema (hash + shape check). Throws
/// RunError for corrupt/truncated files or unsupported versions, DataError
/// for schema mismatches.
CrbmParams load_model(const std::string& path, const cohort::CohortSchema& schema);

}  // namespace crbm::io
