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

#include "esum/training.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <thread>

#include <boost/math/distributions/students_t.hpp>

#include "esum/error.hpp"

namespace esum {

namespace {

std::vector<std::size_t> Indices(const DatasetManifest &manifest,
                                 const std::vector<std::string> &iris) {
  std::vector<std::size_t> out;
  out.reserve(iris.size());
  for (const auto &iri : iris) out.push_back(manifest.EntityIndex(iri));
  return out;
}

// Per-epoch shuffle; the stream depends only on the run seed and the epoch.
void Shuffle(std::vector<std::size_t> &order, std::uint64_t seed, int epoch) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(epoch)};
  std::mt19937_64 rng(seq);
  for (std::size_t i = order.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(order[i - 1], order[j]);
  }
}

double MeanLoss(const SummarizerModel &model, const EncodedDataset &data,
                const std::vector<std::size_t> &entities, int k,
                LabelMode mode) {
  double total = 0.0;
  for (auto idx : entities) {
    const auto &desc = data.manifest().entities[idx];
    auto labels = SupervisionLabels(desc, k, mode);
    auto scored = model.Score(data.vectors(idx), /*keep_attention=*/false);
    // scored.ids is ascending and ids are 0..n-1, so labels line up.
    total += MseLoss(scored.scores, labels).loss;
  }
  return total / static_cast<double>(entities.size());
}

double MeanF1(const SummarizerModel &model, const EncodedDataset &data,
              const std::vector<std::size_t> &entities, int k) {
  double total = 0.0;
  for (auto idx : entities) {
    const auto &desc = data.manifest().entities[idx];
    auto summary = ModelSummary(model, data.vectors(idx), k);
    total += F1AgainstGolds(summary, desc.GoldFor(k));
  }
  return total / static_cast<double>(entities.size());
}

Error WithFold(const Error &e, int fold) {
  return Error(e.code(), "fold " + std::to_string(fold) + ": " + e.what());
}

}  // namespace

void TrainConfig::Validate() const {
  if (max_epochs < 1) throw Error(ErrorCode::kUsage, "max_epochs must be >= 1");
  if (k < 1) throw Error(ErrorCode::kUsage, "k must be >= 1");
  if (!(lr > 0.0)) throw Error(ErrorCode::kUsage, "learning rate must be positive");
}

double F1AgainstGolds(std::span<const TripleId> summary,
                      std::span<const GoldSummary> golds) {
  if (summary.empty()) {
    throw Error(ErrorCode::kEmptySummary, "cannot score an empty summary");
  }
  if (golds.empty()) {
    throw Error(ErrorCode::kNoGoldForK, "no gold summaries to compare with");
  }
  std::set<TripleId> s(summary.begin(), summary.end());
  double total = 0.0;
  for (const auto &g : golds) {
    std::size_t overlap = 0;
    for (TripleId id : s) overlap += g.Contains(id) ? 1 : 0;
    if (overlap == 0) continue;
    double p = static_cast<double>(overlap) / static_cast<double>(s.size());
    double r = static_cast<double>(overlap) / static_cast<double>(g.triple_ids.size());
    total += 2.0 * p * r / (p + r);
  }
  return total / static_cast<double>(golds.size());
}

EncodedDataset::EncodedDataset(const DatasetManifest &manifest,
                               const EmbeddingStore &store)
    : manifest_(&manifest) {
  vectors_.reserve(manifest.entities.size());
  for (const auto &desc : manifest.entities) {
    vectors_.push_back(EncodeDescription(desc, store));
  }
}

std::vector<TripleId> ModelSummary(const SummarizerModel &model,
                                   std::span<const TripleVector> vectors,
                                   int k) {
  return SelectSummary(model.Score(vectors, /*keep_attention=*/false), k);
}

TrainResult TrainFold(const EncodedDataset &data, const FoldSpec &fold,
                      const ModelConfig &model_config,
                      const TrainConfig &train_config) {
  train_config.Validate();
  const auto &manifest = data.manifest();
  const int k = train_config.k;
  auto train = Indices(manifest, fold.train);
  auto valid = Indices(manifest, fold.valid.empty() ? fold.train : fold.valid);
  if (train.empty()) {
    throw Error(ErrorCode::kInvalidFold,
                "fold " + std::to_string(fold.index) + " has no training entities");
  }

  std::vector<std::vector<double>> labels(manifest.entities.size());
  for (auto idx : train) {
    labels[idx] = SupervisionLabels(manifest.entities[idx], k, train_config.label_mode);
  }
  for (auto idx : valid) manifest.entities[idx].GoldFor(k);

  TrainResult result;
  SummarizerModel model(model_config);
  auto tapes = model.MakeTapes();
  auto params = model.ParameterBlocks();
  auto grads = SummarizerModel::TapeBlocks(tapes);
  AdamState adam = MakeAdamState(params, train_config.lr);

  const bool use_f1 = train_config.early_stop_metric == EarlyStopMetric::kValF1;
  std::vector<std::size_t> order = train;
  for (int epoch = 1; epoch <= train_config.max_epochs; ++epoch) {
    Shuffle(order, train_config.seed, epoch);
    double epoch_loss = 0.0;
    for (auto idx : order) {
      for (auto &t : tapes) t.Zero();
      double loss = model.LossAndGradient(data.vectors(idx), labels[idx], tapes);
      if (!std::isfinite(loss)) {
        throw Error(ErrorCode::kNonFiniteLoss,
                    "non-finite loss at epoch " + std::to_string(epoch) +
                        " on entity " + manifest.entities[idx].entity.raw);
      }
      AdamStep(params, grads, adam);
      epoch_loss += loss;
    }
    result.train_loss_history.push_back(epoch_loss / static_cast<double>(order.size()));

    double metric = use_f1 ? MeanF1(model, data, valid, k)
                           : MeanLoss(model, data, valid, k, train_config.label_mode);
    if (!std::isfinite(metric)) {
      throw Error(ErrorCode::kNonFiniteLoss,
                  "non-finite validation metric at epoch " + std::to_string(epoch));
    }
    result.validation_history.push_back(metric);
    bool better = result.chosen_epoch == 0 ||
                  (use_f1 ? metric > result.validation_history[result.chosen_epoch - 1]
                          : metric < result.validation_history[result.chosen_epoch - 1]);
    if (better) {
      result.chosen_epoch = epoch;
      result.model = model;
    }
  }
  return result;
}

EvalReport EvaluateEntities(const DatasetManifest &manifest,
                            std::span<const std::string> entities, int k,
                            const ScoreFn &score) {
  EvalReport report;
  for (const auto &iri : entities) {
    std::size_t idx = manifest.EntityIndex(iri);
    const auto &desc = manifest.entities[idx];
    auto summary = SelectSummary(score(idx), k);
    report.per_entity_f1[iri] = F1AgainstGolds(summary, desc.GoldFor(k));
  }
  double total = 0.0;
  for (const auto &[iri, f1] : report.per_entity_f1) total += f1;
  if (!report.per_entity_f1.empty()) {
    report.mean_f1 = total / static_cast<double>(report.per_entity_f1.size());
  }
  return report;
}

EvalReport EvaluateModel(const SummarizerModel &model, const EncodedDataset &data,
                         std::span<const std::string> entities, int k) {
  return EvaluateEntities(data.manifest(), entities, k, [&](std::size_t idx) {
    return model.Score(data.vectors(idx), /*keep_attention=*/false);
  });
}

CrossValidationResult CrossValidateWith(
    const DatasetManifest &manifest, int k,
    const std::function<FoldOutcome(const FoldSpec &)> &fold_fn) {
  if (manifest.folds.empty()) {
    throw Error(ErrorCode::kInvalidFold, "manifest declares no folds");
  }
  CrossValidationResult result;
  for (const auto &fold : manifest.folds) {
    std::set<std::string> train(fold.train.begin(), fold.train.end());
    for (const auto &iri : fold.test) {
      if (train.count(iri)) {
        throw Error(ErrorCode::kInvalidFold,
                    "fold " + std::to_string(fold.index) + ": test entity " +
                        iri + " is also a training entity");
      }
    }
    try {
      FoldOutcome outcome = fold_fn(fold);
      EvalReport report = EvaluateEntities(manifest, fold.test, k, outcome.score);
      report.fold_index = fold.index;
      report.chosen_epoch = outcome.chosen_epoch;
      for (const auto &[iri, f1] : report.per_entity_f1) {
        if (!result.aggregate.per_entity_f1.emplace(iri, f1).second) {
          throw Error(ErrorCode::kInvalidFold,
                      iri + " is a test entity in more than one fold");
        }
      }
      result.folds.push_back(std::move(report));
    } catch (const Error &e) {
      throw WithFold(e, fold.index);
    }
  }
  double total = 0.0;
  for (const auto &[iri, f1] : result.aggregate.per_entity_f1) total += f1;
  result.aggregate.mean_f1 =
      total / static_cast<double>(result.aggregate.per_entity_f1.size());
  result.aggregate.fold_index = -1;
  return result;
}

CrossValidationRun CrossValidate(const EncodedDataset &data,
                                 const ModelConfig &model_config,
                                 const TrainConfig &train_config,
                                 bool parallel_folds) {
  const auto &folds = data.manifest().folds;
  CrossValidationRun run;
  run.models.resize(folds.size());
  std::vector<std::exception_ptr> errors(folds.size());
  auto train_one = [&](std::size_t f) {
    try {
      run.models[f] = TrainFold(data, folds[f], model_config, train_config);
    } catch (...) {
      errors[f] = std::current_exception();
    }
  };
  if (parallel_folds && folds.size() > 1) {
    std::vector<std::thread> workers;
    for (std::size_t f = 0; f < folds.size(); ++f) workers.emplace_back(train_one, f);
    for (auto &w : workers) w.join();
  } else {
    for (std::size_t f = 0; f < folds.size(); ++f) train_one(f);
  }
  for (std::size_t f = 0; f < folds.size(); ++f) {
    if (!errors[f]) continue;
    try {
      std::rethrow_exception(errors[f]);
    } catch (const Error &e) {
      throw WithFold(e, folds[f].index);
    }
  }

  std::size_t next = 0;
  run.result = CrossValidateWith(data.manifest(), train_config.k,
                                 [&](const FoldSpec &) {
                                   const TrainResult &trained = run.models[next++];
                                   FoldOutcome outcome;
                                   outcome.chosen_epoch = trained.chosen_epoch;
                                   outcome.score = [&data, &trained](std::size_t idx) {
                                     return trained.model.Score(data.vectors(idx), false);
                                   };
                                   return outcome;
                                 });
  return run;
}

std::vector<TripleId> OracleSummary(const EntityDescription &desc, int k) {
  if (k < 1) throw Error(ErrorCode::kUsage, "k must be at least 1");
  auto counts = GoldMembershipCounts(desc, k);
  std::vector<TripleId> ids(counts.size());
  std::iota(ids.begin(), ids.end(), 0);
  std::stable_sort(ids.begin(), ids.end(), [&](TripleId a, TripleId b) {
    return counts[a] > counts[b];
  });
  ids.resize(std::min(ids.size(), static_cast<std::size_t>(k)));
  return ids;
}

ScoredDescription OracleScores(const EntityDescription &desc, int k) {
  auto counts = GoldMembershipCounts(desc, k);
  ScoredDescription scored;
  scored.entity = desc.entity;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    scored.ids.push_back(static_cast<TripleId>(i));
    scored.scores.push_back(counts[i]);
  }
  return scored;
}

EvalReport EvaluateOracle(const DatasetManifest &manifest,
                          std::span<const std::string> entities, int k) {
  return EvaluateEntities(manifest, entities, k, [&](std::size_t idx) {
    return OracleScores(manifest.entities[idx], k);
  });
}

SignificanceResult PairedTTest(std::span<const double> a,
                               std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "paired samples have lengths " + std::to_string(a.size()) +
                    " and " + std::to_string(b.size()));
  }
  if (a.size() < 2) {
    throw Error(ErrorCode::kLengthMismatch, "a paired t-test needs n >= 2");
  }
  const std::size_t n = a.size();
  std::vector<double> diff(n);
  double max_abs = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    diff[i] = a[i] - b[i];
    max_abs = std::max(max_abs, std::abs(diff[i]));
  }
  double mean = std::accumulate(diff.begin(), diff.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double d : diff) ss += (d - mean) * (d - mean);
  double sd = std::sqrt(ss / static_cast<double>(n - 1));

  SignificanceResult result;
  result.n_pairs = static_cast<int>(n);
  // Spread at rounding level counts as zero variance.
  if (sd <= 1e-12 * max_abs || max_abs == 0.0) {
    if (max_abs == 0.0) {
      result.t_statistic = 0.0;
      result.p_value = 1.0;
      return result;
    }
    throw Error(ErrorCode::kDegenerateVariance,
                "paired differences have zero variance and nonzero mean");
  }
  result.t_statistic = mean / (sd / std::sqrt(static_cast<double>(n)));
  boost::math::students_t dist(static_cast<double>(n - 1));
  double p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(result.t_statistic)));
  result.p_value = std::clamp(p, 0.0, 1.0);
  return result;
}

std::pair<std::vector<double>, std::vector<double>> PairedValues(
    const EvalReport &a, const EvalReport &b) {
  if (a.per_entity_f1.size() != b.per_entity_f1.size()) {
    throw Error(ErrorCode::kLengthMismatch, "reports cover different entities");
  }
  std::vector<double> va, vb;
  for (const auto &[iri, f1] : a.per_entity_f1) {
    auto it = b.per_entity_f1.find(iri);
    if (it == b.per_entity_f1.end()) {
      throw Error(ErrorCode::kLengthMismatch, "entity " + iri + " missing from report");
    }
    va.push_back(f1);
    vb.push_back(it->second);
  }
  return {std::move(va), std::move(vb)};
}

std::string FormatSignificance(const SignificanceResult &result) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "t=%.6f, p=%.6g, n=%d", result.t_statistic,
                result.p_value, result.n_pairs);
  return buf;
}

void WriteEvalTsv(const EvalReport &report, std::ostream &out) {
  for (const auto &[iri, f1] : report.per_entity_f1) {
    out << iri << '\t' << FormatDouble(f1) << '\n';
  }
}

}  // namespace esum
