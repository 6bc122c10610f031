//
// Copyright 2026 The gossipmia Authors
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
//

// gossipmia simulate|lambda|validate <config>

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "gossipmia/config.h"
#include "gossipmia/experiment.h"

namespace {

int Fail(const absl::Status& status) {
  std::cerr << "gossipmia: " << status.message() << "\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gossip learning membership-inference simulator"};
  app.require_subcommand(1);
  std::string config_path;

  CLI::App* simulate =
      app.add_subcommand("simulate", "Run the configured gossip experiment");
  simulate->add_option("config", config_path, "key=value config file")->required();
  CLI::App* lambda =
      app.add_subcommand("lambda", "Contraction factor curves of mixing products");
  lambda->add_option("config", config_path, "key=value config file")->required();
  CLI::App* validate = app.add_subcommand("validate", "Parse and check a config");
  validate->add_option("config", config_path, "key=value config file")->required();

  CLI11_PARSE(app, argc, argv);

  absl::StatusOr<gossipmia::ExperimentConfig> cfg =
      gossipmia::ParseConfig(config_path);
  if (!cfg.ok()) return Fail(cfg.status());

  if (*validate) {
    std::cout << gossipmia::SerializeConfig(*cfg);
    return 0;
  }
  if (*lambda) {
    absl::StatusOr<std::string> file = gossipmia::RunLambdaExperiment(*cfg);
    if (!file.ok()) return Fail(file.status());
    std::cout << *file << "\n";
    return 0;
  }
  absl::StatusOr<gossipmia::ExperimentResult> result =
      gossipmia::RunExperiment(*cfg);
  if (!result.ok()) return Fail(result.status());
  for (const std::string& f : result->run_files) std::cout << f << "\n";
  std::cout << result->aggregate_file << "\n" << result->metadata_file << "\n";
  return 0;
}
