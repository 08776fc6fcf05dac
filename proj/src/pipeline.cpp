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

#include "esum/pipeline.hpp"

#include <fstream>

#include "esum/error.hpp"
#include "json.hpp"

namespace esum {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::ofstream OpenOut(const fs::path &path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  return out;
}

json FoldJson(const std::string &dataset, int k, const EvalReport &report) {
  json j;
  j["dataset"] = dataset;
  j["k"] = k;
  j["fold"] = report.fold_index;
  j["mean_f1"] = report.mean_f1;
  j["chosen_epoch"] = report.chosen_epoch;
  return j;
}

void WriteScores(const DatasetManifest &manifest, const EncodedDataset &data,
                 const std::vector<SummarizerModel> &models, int k,
                 const fs::path &path) {
  auto out = OpenOut(path);
  for (std::size_t f = 0; f < manifest.folds.size(); ++f) {
    for (const auto &iri : manifest.folds[f].test) {
      std::size_t idx = manifest.EntityIndex(iri);
      auto scored = models[f].Score(data.vectors(idx), /*keep_attention=*/false);
      scored.entity = manifest.entities[idx].entity;
      WriteScoresTsv(scored, k, out);
    }
  }
}

// chosen_epoch recorded next to a checkpoint by RunTrain, or 0.
int RecordedEpoch(const fs::path &dir, int fold_index) {
  fs::path path = dir / ("fold_" + std::to_string(fold_index) + ".json");
  std::ifstream in(path);
  if (!in) return 0;
  json j = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.contains("chosen_epoch")) return 0;
  return j["chosen_epoch"].get<int>();
}

}  // namespace

fs::path FoldCheckpointPath(const fs::path &dir, int fold_index) {
  return dir / ("fold_" + std::to_string(fold_index) + ".ckpt");
}

void WriteReports(const DatasetManifest &manifest, int k,
                  const CrossValidationResult &result, const fs::path &out_dir) {
  fs::create_directories(out_dir);
  json folds = json::array();
  for (const auto &report : result.folds) {
    std::string stem = "fold_" + std::to_string(report.fold_index);
    auto tsv = OpenOut(out_dir / (stem + ".tsv"));
    WriteEvalTsv(report, tsv);
    json fj = FoldJson(manifest.name, k, report);
    OpenOut(out_dir / (stem + ".json")) << fj.dump(2) << '\n';
    folds.push_back(std::move(fj));
  }
  json aggregate;
  aggregate["dataset"] = manifest.name;
  aggregate["k"] = k;
  aggregate["mean_f1"] = result.aggregate.mean_f1;
  aggregate["n_entities"] = result.aggregate.per_entity_f1.size();
  aggregate["folds"] = std::move(folds);
  OpenOut(out_dir / "report.json") << aggregate.dump(2) << '\n';
}

RunSummary RunTrain(const DatasetManifest &manifest, const EmbeddingStore &store,
                    RunOptions options, const fs::path &out_dir) {
  options.model.embed_dim = store.dim();
  options.model.seed = options.train.seed;
  EncodedDataset data(manifest, store);
  auto run = CrossValidate(data, options.model, options.train, options.parallel_folds);

  fs::create_directories(out_dir);
  RunSummary summary;
  std::vector<SummarizerModel> models;
  for (std::size_t f = 0; f < manifest.folds.size(); ++f) {
    SaveCheckpoint(run.models[f].model,
                   FoldCheckpointPath(out_dir, manifest.folds[f].index));
    summary.chosen_epochs.push_back(run.models[f].chosen_epoch);
    models.push_back(run.models[f].model);
  }
  WriteReports(manifest, options.train.k, run.result, out_dir);
  WriteScores(manifest, data, models, options.train.k, out_dir / "scores.tsv");
  summary.result = std::move(run.result);
  return summary;
}

RunSummary RunEvaluate(const DatasetManifest &manifest,
                       const EmbeddingStore &store, int k,
                       const fs::path &checkpoint_dir, const fs::path &out_dir) {
  EncodedDataset data(manifest, store);
  std::vector<SummarizerModel> models;
  for (const auto &fold : manifest.folds) {
    models.push_back(LoadCheckpoint(FoldCheckpointPath(checkpoint_dir, fold.index)));
  }
  std::size_t next = 0;
  RunSummary summary;
  summary.result = CrossValidateWith(manifest, k, [&](const FoldSpec &fold) {
    const SummarizerModel &model = models[next++];
    FoldOutcome outcome;
    outcome.chosen_epoch = RecordedEpoch(checkpoint_dir, fold.index);
    outcome.score = [&data, &model](std::size_t idx) {
      return model.Score(data.vectors(idx), /*keep_attention=*/false);
    };
    return outcome;
  });
  for (auto &report : summary.result.folds) summary.chosen_epochs.push_back(report.chosen_epoch);
  if (!out_dir.empty()) {
    WriteReports(manifest, k, summary.result, out_dir);
    WriteScores(manifest, data, models, k, out_dir / "scores.tsv");
  }
  return summary;
}

CrossValidationResult RunOracle(const DatasetManifest &manifest, int k) {
  return CrossValidateWith(manifest, k, [&](const FoldSpec &) {
    FoldOutcome outcome;
    outcome.score = [&manifest, k](std::size_t idx) {
      return OracleScores(manifest.entities[idx], k);
    };
    return outcome;
  });
}

}  // namespace esum
