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

#include "esum/esum.h"

#include <algorithm>
#include <exception>
#include <fstream>
#include <memory>
#include <new>
#include <string>

#include "esum/dataset.hpp"
#include "esum/error.hpp"
#include "esum/esbm.hpp"
#include "esum/model.hpp"
#include "esum/pipeline.hpp"
#include "esum/text.hpp"
#include "esum/training.hpp"

struct esum_dataset {
  esum::DatasetManifest manifest;
};

struct esum_store {
  esum::EmbeddingStore store;
};

struct esum_model {
  esum::SummarizerModel model;
};

struct esum_report {
  esum::CrossValidationResult result;
  std::vector<std::string> entity_iris;
  std::vector<double> entity_f1;
};

struct esum_summary {
  esum::ScoredDescription scored;
  std::vector<esum::TripleId> selected;
  std::vector<std::string> statements;
  std::vector<std::string> texts;
  int k = 0;
};

namespace {

thread_local std::string g_last_error;

esum_status Fail(esum_status status, const std::string &message) {
  g_last_error = message;
  return status;
}

// Runs fn and converts exceptions into status codes.
template <typename Fn>
esum_status Guard(Fn &&fn) {
  try {
    fn();
    return ESUM_OK;
  } catch (const esum::Error &e) {
    return Fail(static_cast<esum_status>(e.code()), e.what());
  } catch (const std::bad_alloc &) {
    return Fail(ESUM_ERR_INTERNAL, "out of memory");
  } catch (const std::filesystem::filesystem_error &e) {
    return Fail(ESUM_ERR_IO, e.what());
  } catch (const std::exception &e) {
    return Fail(ESUM_ERR_INTERNAL, e.what());
  }
}

esum_status NullArg(const char *name) {
  return Fail(ESUM_ERR_USAGE, std::string(name) + " must not be NULL");
}

esum_report *MakeReport(esum::CrossValidationResult result) {
  auto report = std::make_unique<esum_report>();
  for (const auto &[iri, f1] : result.aggregate.per_entity_f1) {
    report->entity_iris.push_back(iri);
    report->entity_f1.push_back(f1);
  }
  report->result = std::move(result);
  return report.release();
}

}  // namespace

extern "C" {

const char *esum_version(void) { return "1.0.0"; }

const char *esum_last_error(void) { return g_last_error.c_str(); }

const char *esum_status_name(esum_status status) {
  if (status == ESUM_OK) return "Ok";
  if (status == ESUM_ERR_INTERNAL) return "Internal";
  return esum::ErrorCodeName(static_cast<esum::ErrorCode>(status));
}

esum_status esum_dataset_load(const char *manifest_path, esum_dataset **out) {
  if (!manifest_path) return NullArg("manifest_path");
  if (!out) return NullArg("out");
  return Guard([&] {
    auto ds = std::make_unique<esum_dataset>();
    ds->manifest = esum::LoadManifest(manifest_path);
    *out = ds.release();
  });
}

esum_status esum_dataset_load_esbm(const char *root, const char *dataset,
                                   esum_dataset **out) {
  if (!root) return NullArg("root");
  if (!out) return NullArg("out");
  return Guard([&] {
    esum::EsbmOptions options;
    if (dataset) options.dataset = dataset;
    auto ds = std::make_unique<esum_dataset>();
    ds->manifest = esum::LoadEsbm(root, options);
    *out = ds.release();
  });
}

void esum_dataset_free(esum_dataset *dataset) { delete dataset; }

const char *esum_dataset_name(const esum_dataset *dataset) {
  return dataset ? dataset->manifest.name.c_str() : "";
}

esum_status esum_dataset_counts(const esum_dataset *dataset, size_t *entities,
                                size_t *triples, size_t *golds, size_t *folds) {
  if (!dataset) return NullArg("dataset");
  const auto &m = dataset->manifest;
  if (entities) *entities = m.entities.size();
  if (triples) *triples = m.TripleCount();
  if (golds) *golds = m.GoldCount();
  if (folds) *folds = m.folds.size();
  return ESUM_OK;
}

esum_status esum_dataset_oov_resources(const esum_dataset *dataset,
                                       const esum_store *store,
                                       size_t *resources, size_t *all_oov) {
  if (!dataset) return NullArg("dataset");
  if (!store) return NullArg("store");
  return Guard([&] {
    size_t total = 0, missing = 0;
    for (const auto &desc : dataset->manifest.entities) {
      for (const auto &t : desc.triples) {
        for (const auto *r : {&t.prop(), &t.val()}) {
          ++total;
          if (esum::EmbedResource(*r, store->store).covered == 0) ++missing;
        }
      }
    }
    if (resources) *resources = total;
    if (all_oov) *all_oov = missing;
  });
}

esum_status esum_store_load(const char *vec_path, const esum_dataset *vocabulary,
                            esum_store **out) {
  if (!vec_path) return NullArg("vec_path");
  if (!out) return NullArg("out");
  return Guard([&] {
    auto s = std::make_unique<esum_store>();
    if (vocabulary) {
      auto words = esum::ManifestVocabulary(vocabulary->manifest);
      s->store = esum::LoadVecFile(vec_path, &words);
    } else {
      s->store = esum::LoadVecFile(vec_path);
    }
    *out = s.release();
  });
}

void esum_store_free(esum_store *store) { delete store; }

size_t esum_store_dim(const esum_store *store) {
  return store ? store->store.dim() : 0;
}

size_t esum_store_size(const esum_store *store) {
  return store ? store->store.size() : 0;
}

esum_status esum_filter_vectors(const char *vec_path, const esum_dataset *dataset,
                                const char *out_path, size_t *written) {
  if (!vec_path) return NullArg("vec_path");
  if (!dataset) return NullArg("dataset");
  if (!out_path) return NullArg("out_path");
  return Guard([&] {
    auto words = esum::ManifestVocabulary(dataset->manifest);
    size_t n = esum::FilterVecFile(vec_path, words, out_path);
    if (written) *written = n;
  });
}

void esum_train_options_default(esum_train_options *options) {
  if (!options) return;
  *options = esum_train_options{};
  options->k = 5;
  options->max_epochs = 50;
  options->learning_rate = 0.01;
  options->seed = 0;
  options->early_stop = ESUM_EARLY_STOP_F1;
  options->labels = ESUM_LABEL_FREQUENCY;
  options->parallel_folds = 0;
  options->candidate_layers = 2;
  options->candidate_hidden[0] = options->candidate_hidden[1] = 64;
  options->context_layers = 2;
  options->context_hidden[0] = options->context_hidden[1] = 64;
  options->scorer_layers = 3;
  options->scorer_hidden[0] = options->scorer_hidden[1] =
      options->scorer_hidden[2] = 64;
}

esum_status esum_train(const esum_dataset *dataset, const esum_store *store,
                       const esum_train_options *options, const char *out_dir,
                       esum_report **out) {
  if (!dataset) return NullArg("dataset");
  if (!store) return NullArg("store");
  if (!options) return NullArg("options");
  if (!out_dir) return NullArg("out_dir");
  auto layers = [](const size_t *dims, size_t n, const char *name) {
    if (n == 0 || n > ESUM_MAX_LAYERS) {
      throw esum::Error(esum::ErrorCode::kUsage,
                        std::string(name) + " must have 1.." +
                            std::to_string(ESUM_MAX_LAYERS) + " layers");
    }
    return std::vector<std::size_t>(dims, dims + n);
  };
  return Guard([&] {
    esum::RunOptions run;
    run.train.k = options->k;
    run.train.max_epochs = options->max_epochs;
    run.train.lr = options->learning_rate;
    run.train.seed = options->seed;
    run.train.early_stop_metric = options->early_stop == ESUM_EARLY_STOP_LOSS
                                      ? esum::EarlyStopMetric::kValLoss
                                      : esum::EarlyStopMetric::kValF1;
    run.train.label_mode = options->labels == ESUM_LABEL_BINARY
                               ? esum::LabelMode::kBinaryAny
                               : esum::LabelMode::kFrequency;
    run.parallel_folds = options->parallel_folds != 0;
    run.model.candidate_hidden =
        layers(options->candidate_hidden, options->candidate_layers, "candidate_hidden");
    run.model.context_hidden =
        layers(options->context_hidden, options->context_layers, "context_hidden");
    run.model.scorer_hidden =
        layers(options->scorer_hidden, options->scorer_layers, "scorer_hidden");
    auto summary = esum::RunTrain(dataset->manifest, store->store, run, out_dir);
    esum_report *report = MakeReport(std::move(summary.result));
    if (out) {
      *out = report;
    } else {
      delete report;
    }
  });
}

esum_status esum_evaluate(const esum_dataset *dataset, const esum_store *store,
                          int k, const char *checkpoint_dir, const char *out_dir,
                          esum_report **out) {
  if (!dataset) return NullArg("dataset");
  if (!store) return NullArg("store");
  if (!checkpoint_dir) return NullArg("checkpoint_dir");
  if (!out) return NullArg("out");
  return Guard([&] {
    if (k < 1) throw esum::Error(esum::ErrorCode::kUsage, "k must be >= 1");
    auto summary = esum::RunEvaluate(dataset->manifest, store->store, k,
                                     checkpoint_dir, out_dir ? out_dir : "");
    *out = MakeReport(std::move(summary.result));
  });
}

esum_status esum_evaluate_oracle(const esum_dataset *dataset, int k,
                                 esum_report **out) {
  if (!dataset) return NullArg("dataset");
  if (!out) return NullArg("out");
  return Guard([&] {
    if (k < 1) throw esum::Error(esum::ErrorCode::kUsage, "k must be >= 1");
    *out = MakeReport(esum::RunOracle(dataset->manifest, k));
  });
}

void esum_report_free(esum_report *report) { delete report; }

double esum_report_mean_f1(const esum_report *report) {
  return report ? report->result.aggregate.mean_f1 : 0.0;
}

size_t esum_report_fold_count(const esum_report *report) {
  return report ? report->result.folds.size() : 0;
}

esum_status esum_report_fold(const esum_report *report, size_t i,
                             int *fold_index, double *mean_f1,
                             int *chosen_epoch) {
  if (!report) return NullArg("report");
  if (i >= report->result.folds.size()) {
    return Fail(ESUM_ERR_USAGE, "fold position out of range");
  }
  const auto &fold = report->result.folds[i];
  if (fold_index) *fold_index = fold.fold_index;
  if (mean_f1) *mean_f1 = fold.mean_f1;
  if (chosen_epoch) *chosen_epoch = fold.chosen_epoch;
  return ESUM_OK;
}

size_t esum_report_entity_count(const esum_report *report) {
  return report ? report->entity_iris.size() : 0;
}

esum_status esum_report_entity(const esum_report *report, size_t i,
                               const char **entity_iri, double *f1) {
  if (!report) return NullArg("report");
  if (i >= report->entity_iris.size()) {
    return Fail(ESUM_ERR_USAGE, "entity position out of range");
  }
  if (entity_iri) *entity_iri = report->entity_iris[i].c_str();
  if (f1) *f1 = report->entity_f1[i];
  return ESUM_OK;
}

esum_status esum_report_ttest(const esum_report *a, const esum_report *b,
                              double *t, double *p, int *n) {
  if (!a || !b) return NullArg("report");
  return Guard([&] {
    auto [va, vb] = esum::PairedValues(a->result.aggregate, b->result.aggregate);
    auto r = esum::PairedTTest(va, vb);
    if (t) *t = r.t_statistic;
    if (p) *p = r.p_value;
    if (n) *n = r.n_pairs;
  });
}

esum_status esum_paired_ttest(const double *a, const double *b, size_t n,
                              double *t, double *p) {
  if ((!a || !b) && n > 0) return NullArg("samples");
  return Guard([&] {
    auto r = esum::PairedTTest(std::span<const double>(a, n),
                               std::span<const double>(b, n));
    if (t) *t = r.t_statistic;
    if (p) *p = r.p_value;
  });
}

esum_status esum_model_load(const char *path, esum_model **out) {
  if (!path) return NullArg("path");
  if (!out) return NullArg("out");
  return Guard([&] {
    auto m = std::make_unique<esum_model>();
    m->model = esum::LoadCheckpoint(path);
    *out = m.release();
  });
}

esum_status esum_model_save(const esum_model *model, const char *path) {
  if (!model) return NullArg("model");
  if (!path) return NullArg("path");
  return Guard([&] { esum::SaveCheckpoint(model->model, path); });
}

void esum_model_free(esum_model *model) { delete model; }

size_t esum_model_embed_dim(const esum_model *model) {
  return model ? model->model.config().embed_dim : 0;
}

esum_status esum_summarize(const esum_model *model, const esum_dataset *dataset,
                           const esum_store *store, const char *entity_iri,
                           int k, esum_summary **out) {
  if (!model) return NullArg("model");
  if (!dataset) return NullArg("dataset");
  if (!store) return NullArg("store");
  if (!entity_iri) return NullArg("entity_iri");
  if (!out) return NullArg("out");
  return Guard([&] {
    const auto &desc = dataset->manifest.Entity(entity_iri);
    auto vectors = esum::EncodeDescription(desc, store->store);
    auto s = std::make_unique<esum_summary>();
    s->scored = model->model.Score(vectors, /*keep_attention=*/true);
    s->scored.entity = desc.entity;
    s->selected = esum::SelectSummary(s->scored, k);
    s->k = k;
    for (const auto &t : desc.triples) {
      s->statements.push_back(t.Key() + " .");
      s->texts.push_back(esum::TextualForm(t.prop()) + ": " +
                         esum::TextualForm(t.val()));
    }
    *out = s.release();
  });
}

void esum_summary_free(esum_summary *summary) { delete summary; }

size_t esum_summary_candidates(const esum_summary *summary) {
  return summary ? summary->scored.size() : 0;
}

size_t esum_summary_size(const esum_summary *summary) {
  return summary ? summary->selected.size() : 0;
}

esum_status esum_summary_item(const esum_summary *summary, size_t rank,
                              int *triple_id, double *score) {
  if (!summary) return NullArg("summary");
  if (rank >= summary->selected.size()) {
    return Fail(ESUM_ERR_USAGE, "rank out of range");
  }
  int id = summary->selected[rank];
  if (triple_id) *triple_id = id;
  if (score) *score = summary->scored.ScoreOf(id);
  return ESUM_OK;
}

const char *esum_summary_statement(const esum_summary *summary, int triple_id) {
  if (!summary || triple_id < 0 ||
      static_cast<size_t>(triple_id) >= summary->statements.size()) {
    return "";
  }
  return summary->statements[triple_id].c_str();
}

const char *esum_summary_text(const esum_summary *summary, int triple_id) {
  if (!summary || triple_id < 0 ||
      static_cast<size_t>(triple_id) >= summary->texts.size()) {
    return "";
  }
  return summary->texts[triple_id].c_str();
}

esum_status esum_summary_attention(const esum_summary *summary,
                                   int candidate_id, int context_id,
                                   double *weight) {
  if (!summary) return NullArg("summary");
  const auto &ids = summary->scored.ids;
  auto pos = [&](int id) -> std::ptrdiff_t {
    auto it = std::lower_bound(ids.begin(), ids.end(), id);
    return it != ids.end() && *it == id ? it - ids.begin() : -1;
  };
  auto c = pos(candidate_id), i = pos(context_id);
  if (c < 0 || i < 0) return Fail(ESUM_ERR_USAGE, "unknown triple id");
  if (weight) *weight = summary->scored.attention[c][i];
  return ESUM_OK;
}

esum_status esum_summary_write_tsv(const esum_summary *summary,
                                   const char *path) {
  if (!summary) return NullArg("summary");
  if (!path) return NullArg("path");
  return Guard([&] {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw esum::Error(esum::ErrorCode::kIo, std::string("cannot write ") + path);
    esum::WriteScoresTsv(summary->scored, summary->k, out);
  });
}

}  // extern "C"
