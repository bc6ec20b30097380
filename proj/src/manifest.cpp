#include "coexist/manifest.hpp"

#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "coexist/error.hpp"

namespace coexist {

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error("SHA-256 digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return sha256_hex(ss.str());
}

OutputFile describe_output(const std::filesystem::path& dir, const std::string& name) {
  const auto path = dir / name;
  return OutputFile{name, sha256_file(path), std::filesystem::file_size(path)};
}

nlohmann::json to_json(const RunManifest& m) {
  nlohmann::json j;
  j["artifact_version"] = kArtifactVersion;
  j["command"] = m.command;
  j["seed"] = m.seed;
  j["config"] = m.config;
  j["duration_seconds"] = m.duration_seconds;
  j["outputs"] = nlohmann::json::array();
  for (const auto& o : m.outputs) j["outputs"].push_back({{"file", o.name}, {"sha256", o.sha256}, {"bytes", o.bytes}});
  return j;
}

void write_manifest(const RunManifest& m, const std::filesystem::path& dir) {
  std::ofstream out(dir / "manifest.json", std::ios::binary);
  if (!out) throw Error("cannot write manifest in " + dir.string());
  out << to_json(m).dump(2) << '\n';
}

}  // namespace coexist
