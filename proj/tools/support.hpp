// Copyright 2026 The advbound Authors.
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

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <mutex>
#include <stop_token>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "json.hpp"

namespace advbound::cli {

// Shortest round-trip decimal form; "inf"/"nan" spelled out.
std::string format_double(double x);

// Inclusive grid start:stop:step. Throws kUsage on malformed text, a
// nonpositive step, or an empty grid.
std::vector<double> parse_grid(std::string_view text);

// Comma-separated lists; throw kUsage on malformed entries.
std::vector<double> parse_double_list(std::string_view text);
std::vector<std::uint64_t> parse_uint_list(std::string_view text);

std::string read_file(const std::string& path);

// Lowercase hex SHA-256 of `bytes`.
std::string sha256_hex(std::string_view bytes);

// Library and toolchain versions for run manifests.
nlohmann::json version_info();

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

// Requests stop on token() once `seconds` have elapsed. Nonpositive seconds
// never expire.
class Deadline {
 public:
  explicit Deadline(double seconds);
  Deadline(const Deadline&) = delete;
  Deadline& operator=(const Deadline&) = delete;

  std::stop_token token() const { return source_.get_token(); }
  bool expired() const { return source_.stop_requested(); }

 private:
  std::stop_source source_;
  std::jthread watchdog_;  // destroyed first: joins before source_ goes away
};

}  // namespace advbound::cli
