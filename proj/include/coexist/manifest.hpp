#pragma once

// Run manifest: resolved configuration, artifact version, seed, timing and
// a SHA-256 digest of every output file.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace coexist {

inline constexpr const char* kArtifactVersion = "0.1.0";

struct OutputFile {
  std::string name;  // relative to the output directory
  std::string sha256;
  std::uintmax_t bytes = 0;
};

struct RunManifest {
  std::string command;
  std::uint64_t seed = 0;
  nlohmann::json config;
  double duration_seconds = 0.0;
  std::vector<OutputFile> outputs;
};

std::string sha256_hex(const std::string& data);
std::string sha256_file(const std::filesystem::path& path);

OutputFile describe_output(const std::filesystem::path& dir, const std::string& name);

nlohmann::json to_json(const RunManifest& manifest);
void write_manifest(const RunManifest& manifest, const std::filesystem::path& dir);

}  // namespace coexist
