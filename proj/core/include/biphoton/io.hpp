#pragma once

#include "biphoton/analysis.hpp"
#include "biphoton/scans.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace biphoton {

/// Scan CSV contents as read back from disk.
struct CsvScan {
    bool param_in_meters = true;  // param_m vs param_rad header
    std::vector<ScanSample> samples;
    std::optional<std::string> manifest_json;  // embedded '# manifest:' line
};

/// Renders the scan CSV: an embedded manifest comment line, a header row
/// (param_m|param_rad, rate_norm, counts, counts_err), then one row per
/// sample. '.' decimal, ',' separator; empty cells for absent counts.
std::string scan_csv_text(const ScanResult& result, const std::string& manifest_json);

/// Parses the format written by scan_csv_text. Lines starting with '#'
/// are comments; the manifest line is captured when present.
CsvScan read_scan_csv(const std::filesystem::path& path);
CsvScan parse_scan_csv(const std::string& text);

/// Fit input derived from a CSV: counts (with sqrt-count errors) when the
/// counts column is populated, the ideal rate otherwise.
std::vector<FitSample> fit_samples_from_csv(const CsvScan& csv);

/// Minimal SVG line plot (polyline plus axes) of ideal_rate vs parameter.
std::string scan_svg_text(const ScanResult& result, const std::string& manifest_json);

/// Write-temp-then-rename so partially written files never appear.
void atomic_write_text(const std::filesystem::path& path, const std::string& content);

}  // namespace biphoton
