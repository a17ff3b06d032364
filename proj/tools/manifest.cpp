// Copyright 2026 The kcpm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "manifest.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <json.hpp>
#include <memory>
#include <stdexcept>

#include "kcpm/kcpm.h"

namespace kcpm::cli {

namespace {

struct Sha256 {
  Sha256() : ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free) {
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1)
      throw std::runtime_error("SHA-256 unavailable");
  }
  void update(const void* p, std::size_t n) {
    if (EVP_DigestUpdate(ctx.get(), p, n) != 1) throw std::runtime_error("SHA-256 update failed");
  }
  std::string hex() {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx.get(), md, &len) != 1) throw std::runtime_error("SHA-256 final failed");
    static const char* digits = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
      out += digits[md[i] >> 4];
      out += digits[md[i] & 15];
    }
    return out;
  }
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx;
};

}  // namespace

std::string sha256_hex(std::string_view data) {
  Sha256 h;
  h.update(data.data(), data.size());
  return h.hex();
}

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path + " for hashing");
  Sha256 h;
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) h.update(buf, static_cast<std::size_t>(in.gcount()));
  return h.hex();
}

void write_manifest(const std::string& dir, const Manifest& m) {
  nlohmann::ordered_json j;
  j["tool"] = "kcpm";
  j["version"] = kcpm_version();
  j["subcommand"] = m.subcommand;
  j["seed"] = m.seed;
  j["config_sha256"] = sha256_hex(m.settings);
  nlohmann::ordered_json settings = nlohmann::ordered_json::array();
  std::size_t start = 0;
  while (start < m.settings.size()) {
    std::size_t nl = m.settings.find('\n', start);
    if (nl == std::string::npos) nl = m.settings.size();
    settings.push_back(m.settings.substr(start, nl - start));
    start = nl + 1;
  }
  j["settings"] = settings;
  j["inputs"] = nlohmann::ordered_json::array();
  for (const auto& p : m.inputs) j["inputs"].push_back({{"path", p}, {"sha256", sha256_file(p)}});
  j["outputs"] = nlohmann::ordered_json::array();
  for (const auto& f : m.outputs) j["outputs"].push_back({{"file", f}, {"sha256", sha256_file(dir + "/" + f)}});
  std::ofstream out(dir + "/manifest.json", std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + dir + "/manifest.json");
  out << j.dump(2) << '\n';
}

}  // namespace kcpm::cli
