#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace demontape::io {

/// A table cell: empty (absent value), numeric, or text.
using Cell = std::variant<std::monostate, double, std::string>;

/// Column-named table, the common shape behind the CSV and JSON emitters.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// Shortest round-trip decimal form of a double (17 significant digits max).
std::string format_double(double v);

/// RFC-4180-style quoting: fields containing comma, quote, CR or LF are quoted,
/// embedded quotes doubled.
std::string csv_escape(std::string_view field);

/// Serialize a table as CSV (header row + data rows, LF line endings).
std::string to_csv(const Table& table);

/// Serialize a table as a JSON array of records; empty cells become null.
std::string to_json_records(const Table& table);

/// FNV-1a 64-bit over raw bytes.
std::uint64_t fnv1a64(std::string_view bytes);

/// Write via a temp file in the same directory plus rename.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Run manifest describing one produced output file.
struct ManifestInfo {
  std::string tool_version;
  std::vector<std::pair<std::string, std::string>> resolved;  // parameter name -> value
  std::string timestamp;                                      // ISO-8601 UTC
};

std::string manifest_json(const ManifestInfo& info, const std::filesystem::path& output_path,
                          std::string_view output_content);

/// Atomically write `content` to `path` and the manifest to `path + ".manifest.json"`.
void write_with_manifest(const std::filesystem::path& path, std::string_view content,
                         const ManifestInfo& info);

/// Current time as ISO-8601 UTC.
std::string timestamp_utc();

}  // namespace demontape::io
