// Copyright 2026 The qfabric Authors
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
#include <ostream>
#include <string>
#include <vector>

namespace qfabric::cli {

inline constexpr std::uint64_t kDefaultSeed = 12345;

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kModelFailure = 1;
inline constexpr int kUsage = 2;

/// Rows of string cells under a header; every subcommand produces one.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

/// Splits comma-separated text; the first non-empty line is the header.
Table parse_csv(const std::string &text);
std::string to_csv(const Table &t);
/// Array of objects; cells that parse fully as numbers become numbers.
std::string to_json(const Table &t, bool pretty);
/// Space-aligned columns.
std::string to_pretty(const Table &t);

/// Runs one subcommand. argv[0] is the program name.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace qfabric::cli
