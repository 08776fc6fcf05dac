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

// Shared helpers for the test binaries.

#ifndef ESUM_TESTS_SUPPORT_HPP_
#define ESUM_TESTS_SUPPORT_HPP_

#include <filesystem>
#include <algorithm>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "esum/dataset.hpp"
#include "esum/error.hpp"
#include "esum/model.hpp"
#include "esum/neural.hpp"
#include "esum/text.hpp"

namespace esum::testing {

inline std::filesystem::path DataDir() { return ESUM_TEST_DATA; }

inline std::filesystem::path FixtureManifest() {
  return DataDir() / "fixture" / "manifest.json";
}

// Code of the esum::Error thrown by fn, or nullopt if none is thrown.
inline std::optional<ErrorCode> ErrorOf(const std::function<void()> &fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.code();
  }
  return std::nullopt;
}

// Fresh scratch directory under the system temp dir.
inline std::filesystem::path ScratchDir(const std::string &name) {
  auto dir = std::filesystem::temp_directory_path() / ("esum_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

// Random description vectors with ids 0..n-1 and entries in [-1, 1].
inline std::vector<TripleVector> RandomTriples(std::mt19937_64 &rng,
                                               std::size_t n,
                                               std::size_t dim) {
  std::vector<TripleVector> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i].id = static_cast<TripleId>(i);
    out[i].values.resize(dim);
    for (double &x : out[i].values) x = Uniform(rng, -1.0, 1.0);
  }
  return out;
}

inline ModelConfig ToyConfig(std::uint64_t seed) {
  ModelConfig cfg;
  cfg.embed_dim = 6;
  cfg.candidate_hidden = {8, 8};
  cfg.context_hidden = {8, 8};
  cfg.scorer_hidden = {8, 8, 8};
  cfg.seed = seed;
  return cfg;
}

// Shifts every bias by a random amount so no ReLU sits near its kink.
inline void JitterBiases(SummarizerModel &model, std::mt19937_64 &rng) {
  for (Mlp *mlp : {&model.candidate_mlp(), &model.context_mlp(),
                   &model.scorer_mlp()}) {
    for (auto &layer : mlp->layers()) {
      for (double &b : layer.bias) b = Uniform(rng, -0.3, 0.3);
    }
  }
}

// Random dataset over a small vocabulary: entity i has between min_n and
// max_n triples "<e_i> <p_a> \"v_b\"" and golds_per_k random golds of size
// <= k for each k. Folds are left empty.
struct Synthetic {
  DatasetManifest manifest;
  EmbeddingStore store;
};

inline Synthetic MakeSynthetic(std::uint64_t seed, std::size_t entities,
                               std::size_t min_n, std::size_t max_n,
                               std::vector<int> ks = {5}, int golds_per_k = 6,
                               std::size_t dim = 6) {
  std::mt19937_64 rng(seed);
  Synthetic out{{}, EmbeddingStore(dim)};
  out.manifest.name = "synthetic";
  for (int w = 0; w < 40; ++w) {
    for (const char *prefix : {"p", "v"}) {
      Vec v(dim);
      for (double &x : v) x = Uniform(rng, -1.0, 1.0);
      out.store.Add(prefix + std::to_string(w), std::move(v));
    }
  }
  for (std::size_t e = 0; e < entities; ++e) {
    std::string iri = "http://example.org/e" + std::to_string(e);
    std::size_t n = min_n + rng() % (max_n - min_n + 1);
    std::string text;
    for (std::size_t i = 0; i < n; ++i) {
      text += "<" + iri + "> <http://example.org/p" + std::to_string(rng() % 40) +
              "> \"v" + std::to_string(rng() % 40) + " t" + std::to_string(i) +
              "\" .\n";
    }
    EntityDescription desc;
    desc.entity.raw = iri;
    desc.triples = ParseTriplesDocument(text, iri);
    for (int k : ks) {
      for (int g = 0; g < golds_per_k; ++g) {
        std::vector<TripleId> ids(n);
        for (std::size_t i = 0; i < n; ++i) ids[i] = static_cast<TripleId>(i);
        std::shuffle(ids.begin(), ids.end(), rng);
        std::size_t size = std::min<std::size_t>(n, 1 + rng() % k);
        ids.resize(size);
        std::sort(ids.begin(), ids.end());
        desc.gold[k].push_back(GoldSummary{"g" + std::to_string(g), ids});
      }
    }
    out.manifest.entities.push_back(std::move(desc));
  }
  return out;
}

inline std::vector<std::string> Iris(const DatasetManifest &m, std::size_t from,
                                     std::size_t to) {
  std::vector<std::string> out;
  for (std::size_t i = from; i < to; ++i) out.push_back(m.entities[i].entity.raw);
  return out;
}

}  // namespace esum::testing

#endif  // ESUM_TESTS_SUPPORT_HPP_
