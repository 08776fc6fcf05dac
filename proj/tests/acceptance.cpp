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

// Acceptance checks. Prints one line per criterion:
//
//   AC<n> PASS|FAIL|SKIP  <what was checked>: <measurements>
//
// and exits nonzero if any criterion fails. AC6 needs the ESBM v1.2 benchmark
// directory in ESUM_ESBM_ROOT and a fastText .vec file in ESUM_VECTORS.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "esum/dataset.hpp"
#include "esum/esbm.hpp"
#include "esum/model.hpp"
#include "esum/neural.hpp"
#include "esum/pipeline.hpp"
#include "esum/text.hpp"
#include "esum/training.hpp"
#include "support.hpp"

namespace esum {
namespace {

namespace fs = std::filesystem;

enum class Verdict { kPass, kFail, kSkip };

struct Outcome {
  Verdict verdict = Verdict::kPass;
  std::string detail;
};

std::string Fmt(const char *format, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, value);
  return buf;
}

// Collects failed sub-checks of one criterion.
class Checks {
 public:
  void Expect(bool ok, const std::string &what) {
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    if (!ok) ++failed_;
  }
  Outcome Finish(std::string detail) const {
    if (failed_ == 0) return {Verdict::kPass, std::move(detail)};
    std::string msg = detail + "; " + std::to_string(failed_) + " failed:";
    for (const auto &f : failures_) msg += " [" + f + "]";
    return {Verdict::kFail, msg};
  }

 private:
  std::vector<std::string> failures_;
  int failed_ = 0;
};

ModelConfig PropertyConfig(std::uint64_t seed) {
  ModelConfig cfg;
  cfg.embed_dim = 12;
  cfg.seed = seed;
  return cfg;
}

Outcome Properties() {
  Checks checks;
  std::mt19937_64 rng(2024);
  double worst_attention = 0.0, worst_shift = 0.0, worst_sum = 0.0;
  double cos_lo = 1.0, cos_hi = -1.0;
  int descriptions = 0, permutations = 0;
  for (int d = 0; d < 100; ++d) {
    SummarizerModel model(PropertyConfig(d));
    testing::JitterBiases(model, rng);
    std::size_t n = 1 + rng() % 30;
    auto triples = testing::RandomTriples(rng, n, 24);
    // Ids need not be contiguous or sorted.
    for (auto &t : triples) t.id = static_cast<TripleId>(t.id * 3 + d % 3);
    auto base = model.Score(triples);
    ++descriptions;
    for (int p = 0; p < 10; ++p) {
      auto shuffled = triples;
      std::shuffle(shuffled.begin(), shuffled.end(), rng);
      auto scored = model.Score(shuffled);
      ++permutations;
      bool same = scored.ids == base.ids && scored.scores == base.scores &&
                  scored.attention == base.attention;
      checks.Expect(same, "permutation changed scores, description " + std::to_string(d));
    }
    for (const auto &row : base.attention) {
      double sum = 0.0;
      for (double a : row) sum += a;
      worst_attention = std::max(worst_attention, std::abs(sum - 1.0));
    }
  }
  checks.Expect(worst_attention < 1e-12, "attention sum off by " + Fmt("%.3g", worst_attention));

  for (int trial = 0; trial < 2000; ++trial) {
    std::size_t n = 1 + rng() % 20;
    Vec z(n);
    for (double &x : z) x = Uniform(rng, -5.0, 5.0);
    double c = Uniform(rng, -50.0, 50.0);
    Vec shifted = z;
    for (double &x : shifted) x += c;
    auto a = Softmax(z);
    auto b = Softmax(shifted);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      worst_shift = std::max(worst_shift, std::abs(a[i] - b[i]));
      sum += a[i];
    }
    worst_sum = std::max(worst_sum, std::abs(sum - 1.0));

    Vec u(n), v(n);
    double scale = std::pow(10.0, Uniform(rng, -8.0, 8.0));
    for (std::size_t i = 0; i < n; ++i) {
      u[i] = Uniform(rng, -1.0, 1.0) * scale;
      v[i] = trial % 4 == 0 ? u[i] * (trial % 8 == 0 ? 2.5 : -0.5) : Uniform(rng, -1.0, 1.0);
    }
    double cs = Cosine(u, v);
    cos_lo = std::min(cos_lo, cs);
    cos_hi = std::max(cos_hi, cs);
  }
  checks.Expect(worst_shift < 1e-12, "softmax shift error " + Fmt("%.3g", worst_shift));
  checks.Expect(worst_sum < 1e-12, "softmax sum error " + Fmt("%.3g", worst_sum));
  checks.Expect(cos_lo >= -1.0 - 1e-12 && cos_hi <= 1.0 + 1e-12, "cosine out of range");
  return checks.Finish(std::to_string(descriptions) + " descriptions x " +
                       std::to_string(permutations / descriptions) +
                       " permutations bit-exact, max |sum a - 1| " +
                       Fmt("%.2g", worst_attention) + ", softmax shift error " +
                       Fmt("%.2g", worst_shift) + ", cosine range [" +
                       Fmt("%.15f", cos_lo) + ", " + Fmt("%.15f", cos_hi) + "]");
}

// Relative finite-difference error of the full scorer's MSE gradient. With
// fault set, every bias gradient is doubled before the comparison.
double ScorerGradError(std::uint64_t seed, bool fault) {
  SummarizerModel model(testing::ToyConfig(seed));
  std::mt19937_64 rng(seed * 7919 + 1);
  testing::JitterBiases(model, rng);
  std::size_t n = 2 + rng() % 5;
  auto triples = testing::RandomTriples(rng, n, 12);
  Vec targets(n);
  for (double &t : targets) t = UniformUnit(rng);
  auto tapes = model.MakeTapes();
  model.LossAndGradient(triples, targets, tapes);
  if (fault) {
    for (auto &tape : tapes) {
      for (auto &layer : tape.layers) {
        for (double &b : layer.bias) b *= 2.0;
      }
    }
  }
  auto loss = [&] { return MseLoss(model.Score(triples, false).scores, targets).loss; };
  return GradCheck(loss, model.ParameterBlocks(), SummarizerModel::TapeBlocks(tapes));
}

Outcome GradientOracle() {
  Checks checks;
  double worst = 0.0, weakest_fault = INFINITY;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    double err = ScorerGradError(seed, false);
    double fault = ScorerGradError(seed, true);
    worst = std::max(worst, err);
    weakest_fault = std::min(weakest_fault, fault);
    checks.Expect(err < 1e-4, "seed " + std::to_string(seed) + " error " + Fmt("%.3g", err));
    checks.Expect(fault > 1e-2,
                  "fault seed " + std::to_string(seed) + " error " + Fmt("%.3g", fault));
  }
  return checks.Finish("20 seeds, max relative error " + Fmt("%.2e", worst) +
                       " (< 1e-4); faulted bias gradients min error " +
                       Fmt("%.2e", weakest_fault) + " (> 1e-2)");
}

// Every subset of {0..n-1} of the given size, as bit masks.
std::vector<std::uint32_t> Subsets(std::size_t n, std::size_t size) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) == size) out.push_back(mask);
  }
  return out;
}

Outcome BruteForce() {
  Checks checks;
  auto syn = testing::MakeSynthetic(99, 50, 1, 15, {5, 10}, 6, 6);
  int compared = 0;
  std::mt19937_64 rng(99);
  for (std::size_t e = 0; e < syn.manifest.entities.size(); ++e) {
    const auto &desc = syn.manifest.entities[e];
    std::size_t n = desc.size();
    auto cfg = PropertyConfig(e);
    cfg.embed_dim = syn.store.dim();
    SummarizerModel model(cfg);
    testing::JitterBiases(model, rng);
    auto scored = model.Score(EncodeDescription(desc, syn.store));
    int k = 1 + static_cast<int>(rng() % (n + 2));
    std::size_t size = std::min<std::size_t>(k, n);

    // Highest total score over all subsets of the summary size.
    double best = -INFINITY;
    std::uint32_t best_mask = 0;
    for (auto mask : Subsets(n, size)) {
      double total = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (mask >> i & 1) total += scored.scores[i];
      }
      if (total > best) {
        best = total;
        best_mask = mask;
      }
    }
    std::uint32_t picked = 0;
    for (TripleId id : SelectSummary(scored, k)) picked |= 1u << id;
    checks.Expect(picked == best_mask, "select_summary entity " + std::to_string(e));

    for (int gk : {5, 10}) {
      auto counts = GoldMembershipCounts(desc, gk);
      std::size_t osize = std::min<std::size_t>(gk, n);
      int brute = 0;
      for (auto mask : Subsets(n, osize)) {
        int total = 0;
        for (std::size_t i = 0; i < n; ++i) {
          if (mask >> i & 1) total += counts[i];
        }
        brute = std::max(brute, total);
      }
      int oracle = 0;
      auto summary = OracleSummary(desc, gk);
      checks.Expect(summary.size() == osize, "oracle size entity " + std::to_string(e));
      for (TripleId id : summary) oracle += counts[id];
      checks.Expect(oracle == brute, "oracle count entity " + std::to_string(e));
    }
    ++compared;
  }
  return checks.Finish(std::to_string(compared) +
                       " descriptions (n <= 15): select_summary equals the exhaustive "
                       "argmax; ORACLE membership count equals the brute-force maximum "
                       "for k = 5 and 10");
}

double HandAdam(int steps) {
  double p = 0.0, m = 0.0, v = 0.0;
  for (int t = 1; t <= steps; ++t) {
    m = 0.9 * m + 0.1;
    v = 0.999 * v + 0.001;
    p -= 0.01 * (m / (1.0 - std::pow(0.9, t))) /
         (std::sqrt(v / (1.0 - std::pow(0.999, t))) + 1e-8);
  }
  return p;
}

Outcome HandOracles() {
  Checks checks;
  auto near = [](double a, double b, double tol) { return std::abs(a - b) < tol; };
  auto gold = [](std::vector<TripleId> ids) { return GoldSummary{"a", std::move(ids)}; };

  std::vector<GoldSummary> g1 = {gold({1, 2, 3})};
  checks.Expect(near(F1AgainstGolds(std::vector<TripleId>{1, 2, 3}, g1), 1.0, 1e-12), "f1 exact");
  checks.Expect(near(F1AgainstGolds(std::vector<TripleId>{7, 8}, g1), 0.0, 1e-12), "f1 disjoint");
  std::vector<GoldSummary> g5 = {gold({0, 1, 2, 3, 4})};
  checks.Expect(near(F1AgainstGolds(std::vector<TripleId>{0, 1, 5, 6, 7}, g5), 0.4, 1e-12),
                "f1 0.4");

  auto m0 = MseLoss(Vec{0.3, 0.7}, Vec{0.3, 0.7});
  checks.Expect(m0.loss == 0.0 && m0.grad == Vec{0.0, 0.0}, "mse perfect");
  auto m1 = MseLoss(Vec{1.0}, Vec{0.0});
  checks.Expect(near(m1.loss, 1.0, 1e-12) && near(m1.grad[0], 2.0, 1e-12), "mse unit");
  auto m2 = MseLoss(Vec{1.0, 3.0}, Vec{0.0, 1.0});
  checks.Expect(near(m2.loss, 2.5, 1e-12) && near(m2.grad[0], 1.0, 1e-12) &&
                    near(m2.grad[1], 2.0, 1e-12),
                "mse 2.5");

  auto s0 = Softmax(Vec{0.0, 0.0});
  checks.Expect(near(s0[0], 0.5, 1e-12) && near(s0[1], 0.5, 1e-12), "softmax uniform");
  auto s1 = Softmax(Vec{4.2, 4.2, 4.2});
  for (double x : s1) checks.Expect(near(x, 1.0 / 3.0, 1e-12), "softmax thirds");
  auto s2 = Softmax(Vec{1.0, 0.0});
  double e = std::exp(1.0);
  checks.Expect(near(s2[0], e / (e + 1.0), 1e-12) && near(s2[1], 1.0 / (e + 1.0), 1e-12),
                "softmax (1, 0)");

  Vec param = {0.0}, grad = {1.0};
  std::vector<std::span<double>> params = {param}, grads = {grad};
  auto state = MakeAdamState(params);
  AdamStep(params, grads, state);
  double one = param[0];
  checks.Expect(near(one, HandAdam(1), 1e-12), "adam one step");
  checks.Expect(near(one, -0.01 / (1.0 + 1e-8), 1e-12), "adam closed form");
  AdamStep(params, grads, state);
  double two = param[0];
  checks.Expect(near(two, HandAdam(2), 1e-10), "adam two steps");

  Vec zero_param = {0.5}, zero_grad = {0.0};
  std::vector<std::span<double>> zp = {zero_param}, zg = {zero_grad};
  auto zstate = MakeAdamState(zp);
  AdamStep(zp, zg, zstate);
  checks.Expect(zero_param[0] == 0.5, "adam zero gradient");

  return checks.Finish("f1 {1, 0, 0.4}, mse {0, 1, 2.5}, softmax {1/2, 1/3, e/(e+1)}, adam "
                       "one step " + Fmt("%.12f", one) + ", two steps " + Fmt("%.12f", two));
}

Outcome Memorization() {
  Checks checks;
  auto dir = testing::DataDir() / "memorize";
  auto manifest = LoadManifest(dir / "manifest.json");
  auto store = LoadVecFile(dir / "vectors.vec");
  EncodedDataset data(manifest, store);
  const auto &desc = manifest.Entity("http://example.org/m1");
  auto expected = OracleSummary(desc, 5);
  std::sort(expected.begin(), expected.end());
  std::string epochs;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    FoldSpec fold{0, {desc.entity.raw}, {}, {}};
    TrainConfig tc;
    tc.k = 5;
    tc.max_epochs = 50;
    tc.seed = seed;
    ModelConfig cfg;
    cfg.embed_dim = store.dim();
    cfg.seed = seed;
    auto result = TrainFold(data, fold, cfg, tc);
    auto summary = ModelSummary(result.model, data.vectors(manifest.EntityIndex(desc.entity.raw)), 5);
    std::sort(summary.begin(), summary.end());
    checks.Expect(summary == expected, "seed " + std::to_string(seed));
    epochs += (epochs.empty() ? "" : ", ") + std::to_string(result.chosen_epoch);
  }
  return checks.Finish("single entity, 6 unanimous golds on 5 of 10 triples, recovered for "
                       "seeds 0-2 (chosen epochs " + epochs + " of <= 50)");
}

Outcome Benchmark() {
  const char *root = std::getenv("ESUM_ESBM_ROOT");
  const char *vectors = std::getenv("ESUM_VECTORS");
  if (!root || !vectors) {
    return {Verdict::kSkip,
            "ESBM v1.2 + fastText run needs ESUM_ESBM_ROOT and ESUM_VECTORS"};
  }
  struct Setting {
    const char *db;
    int k;
    double oracle;
    double model;
  };
  // Reference mean F1 per setting: ORACLE, model.
  const Setting settings[] = {{"dbpedia", 5, 0.595, 0.402},
                              {"dbpedia", 10, 0.713, 0.574},
                              {"lmdb", 5, 0.619, 0.474},
                              {"lmdb", 10, 0.678, 0.493}};
  Checks checks;
  std::string detail;
  for (const auto &s : settings) {
    auto manifest = LoadEsbm(root, {s.db});
    auto vocab = ManifestVocabulary(manifest);
    auto store = LoadVecFile(vectors, &vocab);
    double oracle = RunOracle(manifest, s.k).aggregate.mean_f1;
    EncodedDataset data(manifest, store);
    double model = 0.0;
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      ModelConfig cfg;
      cfg.embed_dim = store.dim();
      cfg.seed = seed;
      TrainConfig tc;
      tc.k = s.k;
      tc.seed = seed;
      model += CrossValidate(data, cfg, tc, true).result.aggregate.mean_f1 / 3.0;
    }
    std::string name = std::string(s.db) + " k=" + std::to_string(s.k);
    checks.Expect(std::abs(oracle - s.oracle) <= 0.02, name + " ORACLE");
    checks.Expect(std::abs(model - s.model) <= 0.04, name + " model");
    detail += (detail.empty() ? "" : "; ") + name + ": ORACLE " + Fmt("%.3f", oracle) +
              " (" + Fmt("%.3f", s.oracle) + "), model " + Fmt("%.3f", model) + " (" +
              Fmt("%.3f", s.model) + ")";
  }
  return checks.Finish(detail);
}

Outcome Determinism() {
  Checks checks;
  auto manifest = LoadManifest(testing::FixtureManifest());
  auto store = LoadVecFile(testing::DataDir() / "fixture" / "vectors.vec");
  RunOptions options;
  options.train.k = 2;
  options.train.max_epochs = 10;
  options.train.seed = 123;
  std::vector<fs::path> dirs;
  for (const char *name : {"a", "b"}) {
    dirs.push_back(fs::temp_directory_path() / (std::string("esum_acceptance_") + name));
    fs::remove_all(dirs.back());
    RunTrain(manifest, store, options, dirs.back());
  }
  int files = 0;
  for (const char *name : {"fold_0.ckpt", "fold_0.tsv", "fold_0.json", "scores.tsv", "report.json"}) {
    checks.Expect(ReadFile(dirs[0] / name) == ReadFile(dirs[1] / name), name);
    ++files;
  }
  return checks.Finish("two fixture training runs, seed 123: " + std::to_string(files) +
                       " checkpoint and report files byte-identical");
}

}  // namespace
}  // namespace esum

int main() {
  using esum::Outcome;
  using esum::Verdict;
  struct Criterion {
    const char *name;
    const char *title;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {"AC1", "property suite", esum::Properties},
      {"AC2", "gradient oracle", esum::GradientOracle},
      {"AC3", "brute-force equivalence", esum::BruteForce},
      {"AC4", "hand-oracle equality", esum::HandOracles},
      {"AC5", "memorization", esum::Memorization},
      {"AC6", "benchmark reproduction", esum::Benchmark},
      {"AC7", "determinism", esum::Determinism},
  };
  int failed = 0;
  for (const auto &c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception &e) {
      outcome = {Verdict::kFail, std::string("error: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const char *verdict = outcome.verdict == Verdict::kPass   ? "PASS"
                          : outcome.verdict == Verdict::kSkip ? "SKIP"
                                                              : "FAIL";
    if (outcome.verdict == Verdict::kFail) ++failed;
    std::printf("%s %s  %s: %s [%.2fs]\n", c.name, verdict, c.title, outcome.detail.c_str(),
                secs);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
