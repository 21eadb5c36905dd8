// Copyright 2026 The ADMM Layer Authors
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

#include "admm_layer/cli/cli.hpp"

namespace admm_layer::cli {

ipo::TrainHistory run_train(const TrainOptions& options) {
  const std::uint64_t seed = options.config.seed;
  const ipo::IPODataset dataset =
      options.objective == ipo::Objective::kLearnP
          ? ipo::generate_exp2_dataset(options.d_z, options.d_w, options.m, options.snr, seed)
          : ipo::generate_factor_dataset(options.d_z, options.d_w, options.m, options.snr, seed);
  const ipo::LinearModel init = ipo::LinearModel::random_init(options.d_w, options.d_z, seed);
  return ipo::train(dataset, init, options.objective, options.config);
}

std::vector<TrainRow> train_rows(const ipo::TrainHistory& history) {
  std::vector<TrainRow> rows;
  rows.push_back({0, history.initial_loss, 0.0, 0.0});
  for (std::size_t e = 0; e < history.epoch_loss.size(); ++e) {
    rows.push_back({static_cast<int>(e + 1), history.epoch_loss[e], history.forward_seconds[e],
                    history.backward_seconds[e]});
  }
  return rows;
}

}  // namespace admm_layer::cli
