// Copyright 2026 The ebmtraj Authors
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

// Command-line front end: synth, train, predict, evaluate, explain, inspect.

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "ebmtraj/app/commands.hpp"

namespace {

struct Options {
  std::string config;
  std::uint64_t seed = 0;
  std::string out;
  std::size_t k = 0;
};

void add_common(CLI::App* cmd, Options& o, bool with_k) {
  cmd->add_option("--config", o.config, "run configuration (JSON)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "overrides the config seed");
  cmd->add_option("--out", o.out, "output directory");
  if (with_k) cmd->add_option("--k", o.k, "number of predicted modes")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-modal destination prediction with explainable boosting machines", "ebmtraj"};
  app.require_subcommand(1);
  Options o;
  CLI::App* synth = app.add_subcommand("synth", "generate a synthetic trajectory dataset");
  CLI::App* train = app.add_subcommand("train", "train and save a predictor");
  CLI::App* predict = app.add_subcommand("predict", "write top-k predictions for the test split");
  CLI::App* evaluate = app.add_subcommand("evaluate", "report minFDE@k on the test split");
  CLI::App* explain = app.add_subcommand("explain", "export importance and dependence plots");
  CLI::App* inspect = app.add_subcommand("inspect", "print a predictor summary");
  for (CLI::App* cmd : {synth, train, explain, inspect}) add_common(cmd, o, false);
  for (CLI::App* cmd : {predict, evaluate}) add_common(cmd, o, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    ebmtraj::CommandOverrides overrides;
    CLI::App* cmd = app.get_subcommands().front();
    if (cmd->count("--seed")) overrides.seed = o.seed;
    if (cmd->count("--out")) overrides.out = o.out;
    const ebmtraj::RunConfig config = ebmtraj::resolve_config(o.config, overrides);
    const std::size_t k = o.k;  // 0 keeps the predictor default

    if (cmd == synth) {
      ebmtraj::run_synth(config, std::cout);
    } else if (cmd == train) {
      ebmtraj::run_train(config, std::cout);
    } else if (cmd == predict) {
      ebmtraj::run_predict(config, k, std::cout);
    } else if (cmd == evaluate) {
      ebmtraj::run_evaluate(config, k, std::cout);
    } else if (cmd == explain) {
      ebmtraj::run_explain(config, std::cout);
    } else {
      ebmtraj::run_inspect(config, std::cout);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
