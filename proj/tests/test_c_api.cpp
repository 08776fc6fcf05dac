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

// Exercises libesum through its C interface only.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "esum/esum.h"

namespace {

namespace fs = std::filesystem;

const fs::path kData = ESUM_TEST_DATA;

std::string Slurp(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path Scratch(const std::string &name) {
  auto dir = fs::temp_directory_path() / ("esum_capi_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

struct Fixture {
  esum_dataset *dataset = nullptr;
  esum_store *store = nullptr;

  Fixture() {
    auto manifest = (kData / "fixture" / "manifest.json").string();
    auto vectors = (kData / "fixture" / "vectors.vec").string();
    REQUIRE(esum_dataset_load(manifest.c_str(), &dataset) == ESUM_OK);
    REQUIRE(esum_store_load(vectors.c_str(), dataset, &store) == ESUM_OK);
  }
  ~Fixture() {
    esum_store_free(store);
    esum_dataset_free(dataset);
  }

  esum_train_options Options() const {
    esum_train_options options;
    esum_train_options_default(&options);
    options.k = 2;
    options.max_epochs = 3;
    options.seed = 5;
    return options;
  }
};

TEST_CASE("dataset counts") {
  Fixture fx;
  size_t entities = 0, triples = 0, golds = 0, folds = 0;
  REQUIRE(esum_dataset_counts(fx.dataset, &entities, &triples, &golds, &folds) == ESUM_OK);
  CHECK(entities == 2);
  CHECK(triples == 17);
  CHECK(golds == 12);
  CHECK(folds == 1);
  CHECK(std::string(esum_dataset_name(fx.dataset)) == "fixture");
  CHECK(esum_store_dim(fx.store) == 4);
  size_t resources = 0, oov = 0;
  REQUIRE(esum_dataset_oov_resources(fx.dataset, fx.store, &resources, &oov) == ESUM_OK);
  CHECK(resources == 34);
  // The two birth dates tokenize to numbers only.
  CHECK(oov == 2);
}

TEST_CASE("errors carry status and message") {
  esum_dataset *ds = nullptr;
  auto broken = (kData / "fixture" / "broken_fold.json").string();
  CHECK(esum_dataset_load(broken.c_str(), &ds) == ESUM_ERR_INVALID_FOLD);
  CHECK(ds == nullptr);
  CHECK(std::string(esum_last_error()).find("fold 1") != std::string::npos);
  CHECK(std::string(esum_status_name(ESUM_ERR_INVALID_FOLD)) == "InvalidFold");

  auto missing = (kData / "fixture" / "missing_file.json").string();
  CHECK(esum_dataset_load(missing.c_str(), &ds) == ESUM_ERR_MISSING_FILE);
  CHECK(std::string(esum_last_error()).find("does_not_exist.nt") != std::string::npos);

  CHECK(esum_dataset_load(nullptr, &ds) == ESUM_ERR_USAGE);
  CHECK(esum_dataset_counts(nullptr, nullptr, nullptr, nullptr, nullptr) == ESUM_ERR_USAGE);
  CHECK(std::string(esum_status_name(ESUM_OK)) == "Ok");
  CHECK(std::string(esum_version()).size() > 0);
}

TEST_CASE("filter vectors") {
  Fixture fx;
  auto dir = Scratch("filter");
  auto toy = (kData / "fixture" / "toy5.vec").string();
  auto out = (dir / "out.vec").string();
  size_t written = 99;
  REQUIRE(esum_filter_vectors(toy.c_str(), fx.dataset, out.c_str(), &written) == ESUM_OK);
  CHECK(written == 3);
  esum_store *store = nullptr;
  REQUIRE(esum_store_load(out.c_str(), nullptr, &store) == ESUM_OK);
  CHECK(esum_store_size(store) == 3);
  esum_store_free(store);
}

TEST_CASE("train, evaluate and summarize") {
  Fixture fx;
  auto dir = Scratch("train");
  auto options = fx.Options();
  esum_report *trained = nullptr;
  REQUIRE(esum_train(fx.dataset, fx.store, &options, dir.string().c_str(), &trained) == ESUM_OK);
  for (const char *name : {"fold_0.ckpt", "fold_0.tsv", "fold_0.json", "scores.tsv", "report.json"}) {
    CHECK(fs::exists(dir / name));
  }
  CHECK(esum_report_fold_count(trained) == 1);
  int fold = -1, epoch = 0;
  double f1 = -1;
  REQUIRE(esum_report_fold(trained, 0, &fold, &f1, &epoch) == ESUM_OK);
  CHECK(fold == 0);
  CHECK(epoch >= 1);
  CHECK(epoch <= 3);
  CHECK(f1 == esum_report_mean_f1(trained));
  REQUIRE(esum_report_entity_count(trained) == 1);
  const char *iri = nullptr;
  REQUIRE(esum_report_entity(trained, 0, &iri, &f1) == ESUM_OK);
  CHECK(std::string(iri) == "http://example.org/Ada_Lovelace");
  CHECK(esum_report_entity(trained, 1, &iri, &f1) == ESUM_ERR_USAGE);

  esum_report *evaluated = nullptr;
  REQUIRE(esum_evaluate(fx.dataset, fx.store, 2, dir.string().c_str(), nullptr, &evaluated) ==
          ESUM_OK);
  CHECK(esum_report_mean_f1(evaluated) == esum_report_mean_f1(trained));
  REQUIRE(esum_report_fold(evaluated, 0, nullptr, nullptr, &fold) == ESUM_OK);
  CHECK(fold == epoch);

  esum_report *oracle = nullptr;
  REQUIRE(esum_evaluate_oracle(fx.dataset, 2, &oracle) == ESUM_OK);
  CHECK(std::abs(esum_report_mean_f1(oracle) - 5.0 / 6.0) < 1e-12);
  // One shared entity is too few for a t-test.
  CHECK(esum_report_ttest(oracle, evaluated, nullptr, nullptr, nullptr) ==
        ESUM_ERR_LENGTH_MISMATCH);

  esum_model *model = nullptr;
  REQUIRE(esum_model_load((dir / "fold_0.ckpt").string().c_str(), &model) == ESUM_OK);
  CHECK(esum_model_embed_dim(model) == 4);
  esum_summary *summary = nullptr;
  REQUIRE(esum_summarize(model, fx.dataset, fx.store, "http://example.org/Ada_Lovelace", 3,
                         &summary) == ESUM_OK);
  CHECK(esum_summary_candidates(summary) == 10);
  CHECK(esum_summary_size(summary) == 3);
  double prev = INFINITY;
  for (size_t r = 0; r < 3; ++r) {
    int id = -1;
    double score = 0;
    REQUIRE(esum_summary_item(summary, r, &id, &score) == ESUM_OK);
    CHECK(score <= prev);
    prev = score;
    CHECK(std::string(esum_summary_statement(summary, id)).find("Ada_Lovelace") !=
          std::string::npos);
    double total = 0;
    for (int c = 0; c < 10; ++c) {
      double w = 0;
      REQUIRE(esum_summary_attention(summary, id, c, &w) == ESUM_OK);
      total += w;
    }
    CHECK(std::abs(total - 1.0) < 1e-12);
  }
  // Labels come from the entity's own document, which declares none here.
  CHECK(std::string(esum_summary_text(summary, 0)) == "birthPlace: London");
  CHECK(std::string(esum_summary_text(summary, 42)).empty());
  CHECK(std::string(esum_summary_statement(summary, -1)).empty());
  CHECK(esum_summary_item(summary, 3, nullptr, nullptr) == ESUM_ERR_USAGE);
  CHECK(esum_summary_attention(summary, 0, 10, nullptr) == ESUM_ERR_USAGE);
  REQUIRE(esum_summary_write_tsv(summary, (dir / "one.tsv").string().c_str()) == ESUM_OK);
  CHECK(Slurp(dir / "one.tsv").rfind("http://example.org/Ada_Lovelace\t0\t", 0) == 0);

  esum_summary *none = nullptr;
  CHECK(esum_summarize(model, fx.dataset, fx.store, "http://example.org/nobody", 3, &none) ==
        ESUM_ERR_UNKNOWN_ENTITY);
  CHECK(esum_summarize(model, fx.dataset, fx.store, "http://example.org/Ada_Lovelace", 0,
                       &none) == ESUM_ERR_USAGE);

  REQUIRE(esum_model_save(model, (dir / "copy.ckpt").string().c_str()) == ESUM_OK);
  CHECK(Slurp(dir / "copy.ckpt") == Slurp(dir / "fold_0.ckpt"));

  esum_summary_free(summary);
  esum_model_free(model);
  esum_report_free(oracle);
  esum_report_free(evaluated);
  esum_report_free(trained);
}

TEST_CASE("training twice gives identical files") {
  Fixture fx;
  auto a = Scratch("det_a"), b = Scratch("det_b");
  auto options = fx.Options();
  REQUIRE(esum_train(fx.dataset, fx.store, &options, a.string().c_str(), nullptr) == ESUM_OK);
  REQUIRE(esum_train(fx.dataset, fx.store, &options, b.string().c_str(), nullptr) == ESUM_OK);
  for (const char *name : {"fold_0.ckpt", "fold_0.tsv", "fold_0.json", "scores.tsv", "report.json"}) {
    CHECK(Slurp(a / name) == Slurp(b / name));
  }
}

TEST_CASE("dimension guard and option checks") {
  Fixture fx;
  auto dir = Scratch("guard");
  auto options = fx.Options();
  REQUIRE(esum_train(fx.dataset, fx.store, &options, dir.string().c_str(), nullptr) == ESUM_OK);
  // A 5-dimensional store does not fit a checkpoint trained on 4 dimensions.
  std::ofstream(dir / "five.vec") << "1 5\nbirth 1 2 3 4 5\n";
  esum_store *five = nullptr;
  REQUIRE(esum_store_load((dir / "five.vec").string().c_str(), nullptr, &five) == ESUM_OK);
  esum_report *report = nullptr;
  CHECK(esum_evaluate(fx.dataset, five, 2, dir.string().c_str(), nullptr, &report) ==
        ESUM_ERR_SHAPE_MISMATCH);
  esum_store_free(five);

  options.scorer_layers = 0;
  CHECK(esum_train(fx.dataset, fx.store, &options, dir.string().c_str(), nullptr) ==
        ESUM_ERR_USAGE);
  options = fx.Options();
  options.k = 5;
  CHECK(esum_train(fx.dataset, fx.store, &options, dir.string().c_str(), nullptr) ==
        ESUM_ERR_NO_GOLD_FOR_K);
  CHECK(esum_evaluate(fx.dataset, fx.store, 2, "/nonexistent", nullptr, &report) ==
        ESUM_ERR_MISSING_FILE);
}

TEST_CASE("paired t-test through the C interface") {
  double a[] = {0.8, 0.6, 0.7, 0.9, 0.5};
  double b[] = {0.5, 0.5, 0.5, 0.5, 0.5};
  double t = 0, p = 0;
  REQUIRE(esum_paired_ttest(a, b, 5, &t, &p) == ESUM_OK);
  CHECK(std::abs(t - 2.0 * std::sqrt(2.0)) < 1e-12);
  CHECK(std::abs(p - 0.04742065558431957) < 1e-12);
  double c[] = {0.6, 0.6, 0.6};
  double d[] = {0.5, 0.5, 0.5};
  CHECK(esum_paired_ttest(c, d, 3, &t, &p) == ESUM_ERR_DEGENERATE_VARIANCE);
}

}  // namespace
