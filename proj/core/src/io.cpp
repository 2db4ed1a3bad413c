#include "demontape/io.hpp"

#include <atomic>
#include <chrono>
#include <ctime>
#include <cstdio>
#include <fstream>
#include <random>
#include <stdexcept>
#include <system_error>

#include <unistd.h>

#include <json.hpp>

namespace demontape::io {

std::string format_double(double v) {
  char buf[40];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
  // trim to the shortest representation that still round-trips
  for (int prec = 1; prec < 17; ++prec) {
    char shorter[40];
    std::snprintf(shorter, sizeof shorter, "%.*g", prec, v);
    double back = 0.0;
    std::sscanf(shorter, "%lf", &back);
    if (back == v) return shorter;
  }
  return std::string(buf, static_cast<std::size_t>(n));
}

std::string csv_escape(std::string_view field) {
  const bool needs_quotes = field.find_first_of(",\"\r\n") != std::string_view::npos;
  if (!needs_quotes) return std::string(field);
  std::string out;
  out.reserve(field.size() + 2);
  out.push_back('"');
  for (const char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

namespace {

std::string cell_text(const Cell& cell) {
  if (std::holds_alternative<std::monostate>(cell)) return {};
  if (const double* d = std::get_if<double>(&cell)) return format_double(*d);
  return std::get<std::string>(cell);
}

}  // namespace

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out.push_back(',');
    out += csv_escape(table.columns[c]);
  }
  out.push_back('\n');
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out.push_back(',');
      out += csv_escape(cell_text(row[c]));
    }
    out.push_back('\n');
  }
  return out;
}

std::string to_json_records(const Table& table) {
  nlohmann::ordered_json records = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json rec;
    for (std::size_t c = 0; c < row.size() && c < table.columns.size(); ++c) {
      const Cell& cell = row[c];
      if (std::holds_alternative<std::monostate>(cell)) {
        rec[table.columns[c]] = nullptr;
      } else if (const double* d = std::get_if<double>(&cell)) {
        rec[table.columns[c]] = *d;
      } else {
        rec[table.columns[c]] = std::get<std::string>(cell);
      }
    }
    records.push_back(std::move(rec));
  }
  return records.dump(2) + "\n";
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (const char c : bytes) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 0x100000001b3ull;
  }
  return hash;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  namespace fs = std::filesystem;
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  std::error_code ec;
  fs::create_directories(dir, ec);

  static std::atomic<unsigned> counter{0};
  const fs::path tmp =
      dir / (path.filename().string() + ".tmp." + std::to_string(counter.fetch_add(1)) + "." +
             std::to_string(static_cast<unsigned long>(::getpid())));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out.good()) {
      throw std::runtime_error("write failed for " + tmp.string());
    }
  }
  fs::rename(tmp, path);
}

std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string manifest_json(const ManifestInfo& info, const std::filesystem::path& output_path,
                          std::string_view output_content) {
  nlohmann::ordered_json j;
  j["tool"] = "demontape";
  j["version"] = info.tool_version;
  j["timestamp"] = info.timestamp;
  nlohmann::ordered_json resolved;
  for (const auto& [key, value] : info.resolved) {
    resolved[key] = value;
  }
  j["resolved"] = std::move(resolved);
  nlohmann::ordered_json out;
  out["path"] = output_path.filename().string();
  out["bytes"] = output_content.size();
  char checksum[24];
  std::snprintf(checksum, sizeof checksum, "%016llx",
                static_cast<unsigned long long>(fnv1a64(output_content)));
  out["fnv1a64"] = checksum;
  j["outputs"] = nlohmann::ordered_json::array({std::move(out)});
  return j.dump(2) + "\n";
}

void write_with_manifest(const std::filesystem::path& path, std::string_view content,
                         const ManifestInfo& info) {
  write_file_atomic(path, content);
  const std::filesystem::path manifest_path = path.string() + ".manifest.json";
  write_file_atomic(manifest_path, manifest_json(info, path, content));
}

}  // namespace demontape::io
