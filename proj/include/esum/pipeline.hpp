// Copyright 2026 The esum Authors.
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

// End-to-end runs that read and write the on-disk artifacts:
//
//   <out>/fold_<i>.ckpt        model checkpoint of fold i
//   <out>/fold_<i>.tsv         entity_iri <TAB> f1 for the test entities
//   <out>/fold_<i>.json        {dataset, k, fold, mean_f1, chosen_epoch}
//   <out>/scores.tsv           entity_iri <TAB> triple_id <TAB> score <TAB> selected
//   <out>/report.json          aggregate over folds

#ifndef ESUM_PIPELINE_HPP_
#define ESUM_PIPELINE_HPP_

#include <filesystem>
#include <string>

#include "esum/training.hpp"

namespace esum {

struct RunOptions {
  ModelConfig model;
  TrainConfig train;
  bool parallel_folds = false;
};

struct RunSummary {
  CrossValidationResult result;
  std::vector<int> chosen_epochs;
};

std::filesystem::path FoldCheckpointPath(const std::filesystem::path &dir,
                                         int fold_index);

// Cross-validates and writes checkpoints plus reports into out_dir.
// model.embed_dim is taken from the store.
RunSummary RunTrain(const DatasetManifest &manifest, const EmbeddingStore &store,
                    RunOptions options, const std::filesystem::path &out_dir);

// Re-evaluates fold checkpoints from checkpoint_dir on each fold's test
// entities. Reports are written to out_dir unless it is empty.
RunSummary RunEvaluate(const DatasetManifest &manifest,
                       const EmbeddingStore &store, int k,
                       const std::filesystem::path &checkpoint_dir,
                       const std::filesystem::path &out_dir);

// ORACLE over every fold's test entities.
CrossValidationResult RunOracle(const DatasetManifest &manifest, int k);

void WriteReports(const DatasetManifest &manifest, int k,
                  const CrossValidationResult &result,
                  const std::filesystem::path &out_dir);

}  // namespace esum

#endif  // ESUM_PIPELINE_HPP_
