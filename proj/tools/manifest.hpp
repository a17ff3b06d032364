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

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace kcpm::cli {

std::string sha256_hex(std::string_view data);
/// Throws std::runtime_error when the file cannot be read.
std::string sha256_file(const std::string& path);

struct Manifest {
  std::string subcommand;
  std::string settings;  // canonical settings text
  std::uint64_t seed = 0;
  std::vector<std::string> inputs;   // paths as given
  std::vector<std::string> outputs;  // file names inside the output directory
};

/// Writes `<dir>/manifest.json`. Holds no clock readings, so equal runs give
/// byte-identical manifests.
void write_manifest(const std::string& dir, const Manifest& m);

}  // namespace kcpm::cli
