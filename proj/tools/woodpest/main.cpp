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

#include <iostream>

#include "cli_common.hpp"

int main(int argc, char** argv) {
  using namespace woodpest::cli;
  CLI::App app{"Acoustic wood-pest detection toolkit"};
  app.get_formatter()->column_width(38);
  app.require_subcommand(1);
  app.set_version_flag("--version", "woodpest 0.1.0");
  app.footer("Exit codes: 0 success, 1 usage, 2 data error, 3 runtime error.");

  Registry registry;
  register_data_commands(app, registry);
  register_model_commands(app, registry);
  register_ingest_commands(app, registry);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  if (!registry.action) return kUsage;
  try {
    registry.action();
  } catch (...) {
    return report_exception();
  }
  return kOk;
}
