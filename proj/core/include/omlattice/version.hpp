#pragma once

namespace oml {

// Single source of truth for the tool/report-schema version. Reports embed
// this string, so bump it whenever report output changes shape.
inline constexpr const char* kToolVersion = "omlattice 0.1.0";
inline constexpr int kReportSchemaVersion = 1;

}  // namespace oml
