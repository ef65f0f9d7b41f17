#pragma once

// Run manifest: every CLI invocation records its resolved flags, input file
// digests, and seed beside its outputs, so a run can be reproduced or
// compared. Identical flags+inputs+seed give an identical digests section;
// only the timestamps differ.

#include <chrono>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include <json.hpp>

#include "lidforge/errors.hpp"
#include "lidforge/hashing.hpp"
#include "lidforge/version.hpp"

namespace lidforge {

inline std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open for digest: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx",
                static_cast<unsigned long long>(fnv1a64(buf.str())));
  return hex;
}

class RunManifest {
 public:
  explicit RunManifest(std::string subcommand)
      : subcommand_(std::move(subcommand)), started_(now_iso8601()) {}

  void flag(const std::string& name, const std::string& value) {
    flags_[name] = value;
  }
  void flag(const std::string& name, std::uint64_t value) {
    flags_[name] = std::to_string(value);
  }
  void flag(const std::string& name, double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", value);
    flags_[name] = buf;
  }
  void input(const std::string& path) { inputs_[path] = file_digest(path); }
  void seed(std::uint64_t s) { seed_ = s; }

  void write(const std::string& path) const {
    nlohmann::json j;
    j["tool_version"] = kVersion;
    j["subcommand"] = subcommand_;
    j["flags"] = flags_;
    j["inputs"] = inputs_;
    j["seed"] = seed_;
    j["started"] = started_;
    j["finished"] = now_iso8601();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoFailure("cannot write manifest: " + path);
    out << j.dump(2) << '\n';
  }

 private:
  static std::string now_iso8601() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
  }

  std::string subcommand_;
  std::string started_;
  std::map<std::string, std::string> flags_;
  std::map<std::string, std::string> inputs_;
  std::uint64_t seed_ = 0;
};

}  // namespace lidforge
