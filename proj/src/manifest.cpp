#include "mockq/manifest.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "mockq/error.hpp"
#include "mockq/version.hpp"

namespace mockq {

namespace {

std::string digest_to_hex(const unsigned char* digest, unsigned int len) {
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new()) {
    require(ctx_ != nullptr, "solver_error", "digest context allocation failed");
    require(EVP_DigestInit_ex(ctx_, EVP_sha256(), nullptr) == 1, "solver_error",
            "digest init failed");
  }
  ~Sha256() { EVP_MD_CTX_free(ctx_); }
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  void update(const void* data, std::size_t len) {
    require(EVP_DigestUpdate(ctx_, data, len) == 1, "solver_error", "digest update failed");
  }

  std::string finish() {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    require(EVP_DigestFinal_ex(ctx_, digest, &len) == 1, "solver_error", "digest final failed");
    return digest_to_hex(digest, len);
  }

 private:
  EVP_MD_CTX* ctx_;
};

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  Sha256 h;
  h.update(bytes.data(), bytes.size());
  return h.finish();
}

std::string sha256_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  require(f.good(), "io_not_found", "cannot open: " + path);
  Sha256 h;
  char buf[1 << 16];
  while (f) {
    f.read(buf, sizeof(buf));
    const std::streamsize got = f.gcount();
    if (got > 0) h.update(buf, static_cast<std::size_t>(got));
  }
  return h.finish();
}

void RunManifest::write_atomic(const std::string& path) const {
  nlohmann::json j;
  j["tool"] = "mockq";
  j["version"] = kVersion;
  j["subcommand"] = subcommand;
  j["config"] = nlohmann::json::parse(config_json.empty() ? "{}" : config_json);
  j["seed"] = seed;
  j["wall_seconds"] = wall_seconds;
  nlohmann::json outs = nlohmann::json::object();
  for (const auto& [name, digest] : output_digests) outs[name] = digest;
  j["outputs"] = outs;

  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    require(f.good(), "io_not_found", "cannot open for writing: " + tmp);
    f << j.dump(2) << '\n';
    require(f.good(), "io_not_found", "write failed: " + tmp);
  }
  require(std::rename(tmp.c_str(), path.c_str()) == 0, "io_not_found",
          "rename failed: " + path);
}

}  // namespace mockq
