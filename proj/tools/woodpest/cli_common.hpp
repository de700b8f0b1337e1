// Copyright 2026 The Woodpest Authors. All Rights Reserved.
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
#include <functional>
#include <string>
#include <string_view>

#include <CLI11.hpp>
#include <json.hpp>

#include "woodpest/error.hpp"
#include "woodpest/models/trainer.hpp"

namespace woodpest::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kDataError = 2, kRuntimeError = 3 };

/// Bad flag combination detected after parsing.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Failure of the environment rather than the input data.
class RuntimeFailure : public Error {
 public:
  using Error::Error;
};

using Action = std::function<void()>;

/// Subcommands store their action here; main runs it after parsing.
struct Registry {
  Action action;
};

void register_data_commands(CLI::App& app, Registry& registry);
void register_model_commands(CLI::App& app, Registry& registry);
void register_ingest_commands(CLI::App& app, Registry& registry);

/// Prints {"command": name, "config": config} as one line on stdout.
void echo_config(std::string_view command, const nlohmann::json& config);
/// Prints the final summary as one line on stdout.
void print_summary(const nlohmann::json& summary);
void write_text_file(const std::string& path, const std::string& text);

struct TrainFlags {
  std::size_t epochs = 50;
  std::size_t batch_size = 32;
  double learning_rate = 1e-3;

  void add_to(CLI::App* cmd);
  models::TrainConfig config(std::uint64_t seed) const;
  nlohmann::json to_json() const;
};

/// Per-epoch progress line on stderr.
models::EpochCallback epoch_logger(std::string tag);

/// Maps the in-flight exception to an exit code and reports it on stderr.
int report_exception();

}  // namespace woodpest::cli
