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

#include "cli_common.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "woodpest/ingest/frame.hpp"
#include "woodpest/ingest/simulator.hpp"

namespace woodpest::cli {

void echo_config(std::string_view command, const nlohmann::json& config) {
  std::cout << nlohmann::json{{"command", command}, {"config", config}}.dump() << std::endl;
}

void print_summary(const nlohmann::json& summary) { std::cout << summary.dump() << std::endl; }

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw IoError("cannot write " + path);
}

void TrainFlags::add_to(CLI::App* cmd) {
  cmd->add_option("--epochs", epochs, "Training epochs")->capture_default_str()->check(
      CLI::PositiveNumber);
  cmd->add_option("--batch", batch_size, "Mini-batch size")->capture_default_str()->check(
      CLI::PositiveNumber);
  cmd->add_option("--lr", learning_rate, "Adam learning rate")->capture_default_str()->check(
      CLI::PositiveNumber);
}

models::TrainConfig TrainFlags::config(std::uint64_t seed) const {
  models::TrainConfig cfg;
  cfg.epochs = epochs;
  cfg.batch_size = batch_size;
  cfg.seed = seed;
  cfg.adam.lr = learning_rate;
  return cfg;
}

nlohmann::json TrainFlags::to_json() const {
  return {{"epochs", epochs}, {"batch", batch_size}, {"lr", learning_rate}};
}

models::EpochCallback epoch_logger(std::string tag) {
  return [tag = std::move(tag)](std::size_t epoch, const models::EpochStats& s) {
    char line[256];
    if (std::isnan(s.val_loss)) {
      std::snprintf(line, sizeof line, "[%s] epoch %zu loss %.5f acc %.4f", tag.c_str(), epoch,
                    s.train_loss, s.train_accuracy);
    } else {
      std::snprintf(line, sizeof line, "[%s] epoch %zu loss %.5f acc %.4f val_loss %.5f val_acc %.4f",
                    tag.c_str(), epoch, s.train_loss, s.train_accuracy, s.val_loss,
                    s.val_accuracy);
    }
    std::cerr << line << std::endl;
  };
}

int report_exception() {
  try {
    throw;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const RuntimeFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  } catch (const ingest::TransportError& e) {
    std::cerr << "error: " << e.what() << " (" << e.frames_sent() << " frames sent)\n";
    return kRuntimeError;
  } catch (const TrainingError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  } catch (const Error& e) {
    // Format, dataset, shape and input I/O problems.
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
}

}  // namespace woodpest::cli
