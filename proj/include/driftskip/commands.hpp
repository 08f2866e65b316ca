// Copyright 2026 The driftskip Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace driftskip {

/// Flags shared by every subcommand.
struct CliOptions {
  std::filesystem::path config;
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out;
  bool exact = false;
  std::optional<std::uint64_t> shots;
  /// `report` inputs.
  std::vector<std::filesystem::path> records;
};

// Each returns the process exit code and writes progress to `log`.
int cmd_run(const CliOptions& opts, std::ostream& log);
int cmd_compare(const CliOptions& opts, std::ostream& log);
int cmd_sweep(const CliOptions& opts, std::ostream& log);
int cmd_gen_noise(const CliOptions& opts, std::ostream& log);
int cmd_report(const CliOptions& opts, std::ostream& log);

}  // namespace driftskip
