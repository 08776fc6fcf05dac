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

// Training with early stopping, cross-validation, F1 against multiple gold
// summaries, the gold-frequency ORACLE, and paired significance tests.

#ifndef ESUM_TRAINING_HPP_
#define ESUM_TRAINING_HPP_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "esum/dataset.hpp"
#include "esum/model.hpp"
#include "esum/text.hpp"

namespace esum {

enum class EarlyStopMetric { kValF1, kValLoss };

struct TrainConfig {
  double lr = 0.01;
  int max_epochs = 50;
  int k = 5;
  std::uint64_t seed = 0;
  EarlyStopMetric early_stop_metric = EarlyStopMetric::kValF1;
  LabelMode label_mode = LabelMode::kFrequency;

  void Validate() const;
};

// Mean over golds of the per-gold F1 of summary. Throws kEmptySummary when
// summary is empty and kNoGoldForK when golds is empty.
double F1AgainstGolds(std::span<const TripleId> summary,
                      std::span<const GoldSummary> golds);

struct EvalReport {
  std::map<std::string, double> per_entity_f1;
  double mean_f1 = 0.0;
  int fold_index = -1;
  int chosen_epoch = 0;
};

// Triple vectors of every manifest entity, computed once.
class EncodedDataset {
 public:
  EncodedDataset(const DatasetManifest &manifest, const EmbeddingStore &store);

  const DatasetManifest &manifest() const { return *manifest_; }
  const std::vector<TripleVector> &vectors(std::size_t entity_index) const {
    return vectors_[entity_index];
  }

 private:
  const DatasetManifest *manifest_;
  std::vector<std::vector<TripleVector>> vectors_;
};

struct TrainResult {
  SummarizerModel model;
  int chosen_epoch = 0;
  // Validation metric after each epoch (F1 or loss, per the config).
  std::vector<double> validation_history;
  std::vector<double> train_loss_history;
};

// Trains one model on fold.train with early stopping on fold.valid. An empty
// validation list falls back to the training entities.
// Throws kNoGoldForK, kNonFiniteLoss.
TrainResult TrainFold(const EncodedDataset &data, const FoldSpec &fold,
                      const ModelConfig &model_config,
                      const TrainConfig &train_config);

// Per-entity scorer used by the evaluation harness.
using ScoreFn = std::function<ScoredDescription(std::size_t entity_index)>;

std::vector<TripleId> ModelSummary(const SummarizerModel &model,
                                   std::span<const TripleVector> vectors,
                                   int k);

EvalReport EvaluateEntities(const DatasetManifest &manifest,
                            std::span<const std::string> entities, int k,
                            const ScoreFn &score);
EvalReport EvaluateModel(const SummarizerModel &model,
                         const EncodedDataset &data,
                         std::span<const std::string> entities, int k);

struct FoldOutcome {
  ScoreFn score;
  int chosen_epoch = 0;
};

struct CrossValidationResult {
  std::vector<EvalReport> folds;
  // Per-entity F1 of every test entity across folds; fold_index = -1.
  EvalReport aggregate;
};

// Generic driver: fold_fn builds a scorer per fold, which is evaluated on that
// fold's test entities. Errors are rethrown with the fold index attached.
CrossValidationResult CrossValidateWith(
    const DatasetManifest &manifest, int k,
    const std::function<FoldOutcome(const FoldSpec &)> &fold_fn);

struct CrossValidationRun {
  CrossValidationResult result;
  std::vector<TrainResult> models;  // one per fold, in fold order
};

CrossValidationRun CrossValidate(const EncodedDataset &data,
                                 const ModelConfig &model_config,
                                 const TrainConfig &train_config,
                                 bool parallel_folds = false);

// The k triples appearing most often across the gold summaries of slot k,
// ties by ascending id. Throws kNoGoldForK.
std::vector<TripleId> OracleSummary(const EntityDescription &desc, int k);

// Gold-membership counts as scores, so SelectSummary reproduces OracleSummary.
ScoredDescription OracleScores(const EntityDescription &desc, int k);

EvalReport EvaluateOracle(const DatasetManifest &manifest,
                          std::span<const std::string> entities, int k);

struct SignificanceResult {
  double t_statistic = 0.0;
  double p_value = 1.0;
  int n_pairs = 0;
};

// Paired two-tailed t-test on a - b with n - 1 degrees of freedom.
// Throws kLengthMismatch and kDegenerateVariance (zero variance, nonzero
// mean difference). Identical samples give t = 0, p = 1.
SignificanceResult PairedTTest(std::span<const double> a,
                               std::span<const double> b);

// Per-entity values of two reports over their shared entities, sorted by
// entity. Throws kLengthMismatch if the entity sets differ.
std::pair<std::vector<double>, std::vector<double>> PairedValues(
    const EvalReport &a, const EvalReport &b);

std::string FormatSignificance(const SignificanceResult &result);

// "entity_iri<TAB>f1" rows.
void WriteEvalTsv(const EvalReport &report, std::ostream &out);

}  // namespace esum

#endif  // ESUM_TRAINING_HPP_
