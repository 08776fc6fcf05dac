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

// esum: command-line front end of libesum.
//
//   esum ingest          --manifest M [--vectors V]
//   esum filter-vectors  --manifest M --vectors V --out F
//   esum train           --manifest M --vectors V --k K --out DIR
//   esum evaluate        --manifest M --vectors V --k K --checkpoint DIR
//   esum summarize       --manifest M --vectors V --checkpoint F --entity IRI
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric failure.

#include <algorithm>
#include <cstdio>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "esum/esum.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumeric = 3;

struct Failure {
  esum_status status;
};

int ExitCode(esum_status status) {
  switch (status) {
    case ESUM_OK:
      return kExitOk;
    case ESUM_ERR_USAGE:
      return kExitUsage;
    case ESUM_ERR_NON_FINITE_LOSS:
    case ESUM_ERR_DEGENERATE_VARIANCE:
      return kExitNumeric;
    default:
      return kExitData;
  }
}

void Check(esum_status status) {
  if (status == ESUM_OK) return;
  std::fprintf(stderr, "esum: %s: %s\n", esum_status_name(status),
               esum_last_error());
  throw Failure{status};
}

template <typename T, void (*Free)(T *)>
struct Deleter {
  void operator()(T *p) const { Free(p); }
};
using Dataset = std::unique_ptr<esum_dataset, Deleter<esum_dataset, esum_dataset_free>>;
using Store = std::unique_ptr<esum_store, Deleter<esum_store, esum_store_free>>;
using Model = std::unique_ptr<esum_model, Deleter<esum_model, esum_model_free>>;
using Report = std::unique_ptr<esum_report, Deleter<esum_report, esum_report_free>>;
using Summary = std::unique_ptr<esum_summary, Deleter<esum_summary, esum_summary_free>>;

struct Args {
  std::string manifest;
  std::string esbm_root;
  std::string esbm_dataset = "dbpedia";
  std::string vectors;
  std::string out;
  std::string checkpoint;
  std::string entity;
  std::string early_stop = "f1";
  std::string labels = "frequency";
  int k = 5;
  int epochs = 50;
  double lr = 0.01;
  std::uint64_t seed = 0;
  bool parallel_folds = false;
  bool oracle = false;
  int attention = 3;
};

Dataset LoadDataset(const Args &args) {
  esum_dataset *ds = nullptr;
  if (!args.esbm_root.empty()) {
    Check(esum_dataset_load_esbm(args.esbm_root.c_str(),
                                 args.esbm_dataset.c_str(), &ds));
  } else {
    Check(esum_dataset_load(args.manifest.c_str(), &ds));
  }
  return Dataset(ds);
}

Store LoadStore(const Args &args, const esum_dataset *vocabulary) {
  esum_store *store = nullptr;
  Check(esum_store_load(args.vectors.c_str(), vocabulary, &store));
  return Store(store);
}

void PrintReport(const esum_report *report, const char *label) {
  for (size_t i = 0; i < esum_report_fold_count(report); ++i) {
    int fold = 0, epoch = 0;
    double f1 = 0.0;
    Check(esum_report_fold(report, i, &fold, &f1, &epoch));
    if (epoch > 0) {
      std::printf("%s fold %d: mean F1 %.6f (epoch %d)\n", label, fold, f1, epoch);
    } else {
      std::printf("%s fold %d: mean F1 %.6f\n", label, fold, f1);
    }
  }
  std::printf("%s mean F1 %.6f over %zu entities\n", label,
              esum_report_mean_f1(report), esum_report_entity_count(report));
}

int RunIngest(const Args &args) {
  Dataset ds = LoadDataset(args);
  size_t entities = 0, triples = 0, golds = 0, folds = 0;
  Check(esum_dataset_counts(ds.get(), &entities, &triples, &golds, &folds));
  std::printf("%zu entities, %zu triples, %zu golds\n", entities, triples, golds);
  std::printf("%zu folds\n", folds);
  if (!args.vectors.empty()) {
    Store store = LoadStore(args, ds.get());
    size_t resources = 0, missing = 0;
    Check(esum_dataset_oov_resources(ds.get(), store.get(), &resources, &missing));
    std::printf("%zu word vectors of dim %zu, %zu prop/val resources\n",
                esum_store_size(store.get()), esum_store_dim(store.get()), resources);
    if (missing > 0) {
      std::fprintf(stderr,
                   "warning: %zu of %zu prop/val resources have no token in the "
                   "vectors and embed to zero\n",
                   missing, resources);
    }
  }
  return kExitOk;
}

int RunFilter(const Args &args) {
  Dataset ds = LoadDataset(args);
  size_t written = 0;
  Check(esum_filter_vectors(args.vectors.c_str(), ds.get(), args.out.c_str(),
                            &written));
  std::printf("%zu vectors written to %s\n", written, args.out.c_str());
  return kExitOk;
}

int RunTrain(const Args &args) {
  Dataset ds = LoadDataset(args);
  Store store = LoadStore(args, ds.get());
  esum_train_options options;
  esum_train_options_default(&options);
  options.k = args.k;
  options.max_epochs = args.epochs;
  options.learning_rate = args.lr;
  options.seed = args.seed;
  options.early_stop =
      args.early_stop == "loss" ? ESUM_EARLY_STOP_LOSS : ESUM_EARLY_STOP_F1;
  options.labels = args.labels == "binary" ? ESUM_LABEL_BINARY : ESUM_LABEL_FREQUENCY;
  options.parallel_folds = args.parallel_folds ? 1 : 0;
  esum_report *report = nullptr;
  Check(esum_train(ds.get(), store.get(), &options, args.out.c_str(), &report));
  Report owned(report);
  PrintReport(owned.get(), "model");
  std::printf("wrote %s\n", args.out.c_str());
  return kExitOk;
}

int RunEvaluate(const Args &args) {
  Dataset ds = LoadDataset(args);
  esum_report *oracle = nullptr;
  Report model_report;
  if (!args.checkpoint.empty()) {
    Store store = LoadStore(args, ds.get());
    esum_report *report = nullptr;
    Check(esum_evaluate(ds.get(), store.get(), args.k, args.checkpoint.c_str(),
                        args.out.empty() ? nullptr : args.out.c_str(), &report));
    model_report.reset(report);
    PrintReport(model_report.get(), "model");
  }
  if (args.oracle) {
    Check(esum_evaluate_oracle(ds.get(), args.k, &oracle));
    Report oracle_report(oracle);
    PrintReport(oracle_report.get(), "oracle");
    if (model_report && esum_report_entity_count(model_report.get()) < 2) {
      std::printf("t-test skipped: fewer than 2 test entities\n");
    } else if (model_report) {
      double t = 0.0, p = 1.0;
      int n = 0;
      Check(esum_report_ttest(oracle_report.get(), model_report.get(), &t, &p, &n));
      std::printf("t=%.6f, p=%.6g, n=%d\n", t, p, n);
    }
  }
  return kExitOk;
}

int RunSummarize(const Args &args) {
  Dataset ds = LoadDataset(args);
  Store store = LoadStore(args, ds.get());
  esum_model *raw_model = nullptr;
  Check(esum_model_load(args.checkpoint.c_str(), &raw_model));
  Model model(raw_model);
  esum_summary *raw_summary = nullptr;
  Check(esum_summarize(model.get(), ds.get(), store.get(), args.entity.c_str(),
                       args.k, &raw_summary));
  Summary summary(raw_summary);

  size_t n = esum_summary_candidates(summary.get());
  std::printf("%s: top %zu of %zu triples\n", args.entity.c_str(),
              esum_summary_size(summary.get()), n);
  std::vector<int> selected;
  for (size_t rank = 0; rank < esum_summary_size(summary.get()); ++rank) {
    int id = 0;
    double score = 0.0;
    Check(esum_summary_item(summary.get(), rank, &id, &score));
    selected.push_back(id);
    std::printf("%zu\t%d\t%.6f\t%s\n", rank + 1, id, score,
                esum_summary_text(summary.get(), id));
    std::printf("\t\t\t%s\n", esum_summary_statement(summary.get(), id));
  }
  if (args.attention > 0) {
    std::printf("attention (strongest context triples per summary triple)\n");
    for (int id : selected) {
      std::vector<std::pair<double, int>> weights;
      for (size_t c = 0; c < n; ++c) {
        double w = 0.0;
        Check(esum_summary_attention(summary.get(), id, static_cast<int>(c), &w));
        weights.emplace_back(-w, static_cast<int>(c));
      }
      std::sort(weights.begin(), weights.end());
      std::printf("%d:", id);
      size_t shown = std::min<size_t>(weights.size(), args.attention);
      for (size_t i = 0; i < shown; ++i) {
        std::printf(" %d(%.4f)", weights[i].second, -weights[i].first);
      }
      std::printf("\n");
    }
  }
  if (!args.out.empty()) {
    Check(esum_summary_write_tsv(summary.get(), args.out.c_str()));
  }
  return kExitOk;
}

void AddSource(CLI::App *cmd, Args &args) {
  auto *manifest = cmd->add_option("--manifest", args.manifest, "Dataset manifest (JSON)");
  auto *root = cmd->add_option("--esbm-root", args.esbm_root,
                               "ESBM benchmark directory, instead of --manifest");
  manifest->excludes(root);
  cmd->add_option("--esbm-dataset", args.esbm_dataset, "dbpedia, lmdb or all")
      ->check(CLI::IsMember({"dbpedia", "lmdb", "all"}))
      ->needs(root);
  cmd->callback([&args] {
    if (args.manifest.empty() && args.esbm_root.empty()) {
      throw CLI::RequiredError("--manifest or --esbm-root");
    }
  });
}

void AddK(CLI::App *cmd, Args &args) {
  cmd->add_option("--k", args.k, "Summary size (gold slot)")
      ->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Supervised entity summarization for RDF descriptions"};
  app.set_version_flag("--version", esum_version());
  app.require_subcommand(1);
  Args args;

  auto *ingest = app.add_subcommand("ingest", "Validate a dataset and print counts");
  AddSource(ingest, args);
  ingest->add_option("--vectors", args.vectors, "Report coverage against a .vec file")
      ->check(CLI::ExistingFile);

  auto *filter = app.add_subcommand("filter-vectors",
                                    "Keep only the word vectors a dataset needs");
  AddSource(filter, args);
  filter->add_option("--vectors", args.vectors, "Source .vec file")->required();
  filter->add_option("--out", args.out, "Output .vec file")->required();

  auto *train = app.add_subcommand("train", "Cross-validate and write checkpoints");
  AddSource(train, args);
  train->add_option("--vectors", args.vectors, ".vec word vectors")->required();
  AddK(train, args);
  train->add_option("--seed", args.seed, "Seed for initialization and shuffling");
  train->add_option("--out", args.out, "Output directory")->required();
  train->add_option("--epochs", args.epochs, "Maximum epochs")->check(CLI::PositiveNumber);
  train->add_option("--lr", args.lr, "Adam learning rate")->check(CLI::PositiveNumber);
  train->add_option("--early-stop", args.early_stop, "Validation metric")
      ->check(CLI::IsMember({"f1", "loss"}));
  train->add_option("--labels", args.labels, "Supervision target")
      ->check(CLI::IsMember({"frequency", "binary"}));
  train->add_flag("--parallel-folds", args.parallel_folds, "Train folds concurrently");

  auto *evaluate = app.add_subcommand("evaluate", "Re-evaluate fold checkpoints");
  AddSource(evaluate, args);
  evaluate->add_option("--vectors", args.vectors, ".vec word vectors");
  AddK(evaluate, args);
  evaluate->add_option("--checkpoint", args.checkpoint,
                       "Directory holding fold_<i>.ckpt");
  evaluate->add_option("--out", args.out, "Write reports to this directory");
  evaluate->add_flag("--oracle", args.oracle,
                     "Also evaluate ORACLE and test the difference");
  evaluate->callback([&args] {
    if (args.manifest.empty() && args.esbm_root.empty()) {
      throw CLI::RequiredError("--manifest or --esbm-root");
    }
    if (args.checkpoint.empty() && !args.oracle) {
      throw CLI::RequiredError("--checkpoint or --oracle");
    }
    if (!args.checkpoint.empty() && args.vectors.empty()) {
      throw CLI::RequiredError("--vectors");
    }
  });

  auto *summarize = app.add_subcommand("summarize", "Summarize one entity");
  AddSource(summarize, args);
  summarize->add_option("--vectors", args.vectors, ".vec word vectors")->required();
  summarize->add_option("--checkpoint", args.checkpoint, "Checkpoint file")->required();
  summarize->add_option("--entity", args.entity, "Entity IRI")->required();
  AddK(summarize, args);
  summarize->add_option("--attention", args.attention,
                        "Context triples shown per summary triple (0 hides)")
      ->check(CLI::NonNegativeNumber);
  summarize->add_option("--out", args.out, "Also write scores as TSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*ingest) return RunIngest(args);
    if (*filter) return RunFilter(args);
    if (*train) return RunTrain(args);
    if (*evaluate) return RunEvaluate(args);
    if (*summarize) return RunSummarize(args);
  } catch (const Failure &f) {
    return ExitCode(f.status);
  }
  return kExitUsage;
}
