#pragma once

#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "rhlab/checkpoint.hpp"
#include "rhlab/harness/csv.hpp"

namespace rhlab::harness {

struct FileDigest {
  std::string path;
  std::string fnv1a64;
};

// Written next to every run's data. Rerunning `command_line` reproduces the
// data files byte for byte; only the timestamps differ.
struct RunManifest {
  std::string tool_version;
  std::string command_line;
  std::uint64_t seed = 0;
  std::string started_at;
  std::string finished_at;
  std::string status = "complete";  // or "halted"
  nlohmann::ordered_json parameters = nlohmann::ordered_json::object();
  nlohmann::ordered_json results = nlohmann::ordered_json::object();
  std::vector<FileDigest> files;

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["tool_version"] = tool_version;
    j["command_line"] = command_line;
    j["seed"] = seed;
    j["started_at"] = started_at;
    j["finished_at"] = finished_at;
    j["status"] = status;
    j["parameters"] = parameters;
    j["results"] = results;
    j["files"] = nlohmann::ordered_json::array();
    for (const auto& f : files) j["files"].push_back({{"path", f.path}, {"fnv1a64", f.fnv1a64}});
    return j;
  }
};

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline FileDigest digest_file(const std::filesystem::path& path) {
  return {path.string(), hex64(fnv1a64(read_file(path)))};
}

// data.csv -> data<suffix>, e.g. ".manifest.json".
inline std::filesystem::path sibling_path(const std::filesystem::path& data, const std::string& suffix) {
  auto p = data;
  p.replace_extension();
  p += suffix;
  return p;
}

inline void write_manifest(const RunManifest& m, const std::filesystem::path& path) {
  write_atomically(path, m.to_json().dump(2) + "\n");
}

}  // namespace rhlab::harness
