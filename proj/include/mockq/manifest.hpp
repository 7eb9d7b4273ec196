#pragma once
#include <cstdint>
#include <map>
#include <string>

namespace mockq {

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::string& path);

struct RunManifest {
  std::string subcommand;
  std::string config_json;  // echo of the effective configuration
  std::uint64_t seed;
  double wall_seconds;
  std::map<std::string, std::string> output_digests;  // filename -> sha256

  // Serializes to JSON and writes via a temp file + rename so a partial run
  // never leaves a truncated manifest.
  void write_atomic(const std::string& path) const;
};

}  // namespace mockq
