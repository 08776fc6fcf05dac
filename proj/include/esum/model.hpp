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

// Context-based triple scorer.
//
// Every candidate triple t is encoded as the concatenation of the embeddings
// of its property and value. Three MLPs act on these vectors:
//
//   h   = candidate(t)                       final representation of t
//   g_i = context(t_i)           for every triple of the description
//   a_i = softmax_i(cos(h, g_i))
//   d   = sum_i a_i g_i                      description representation
//   s   = scorer([h; d])                     salience of t in its context
//
// The context always includes the candidate itself. Sums over the context run
// in ascending triple-id order, so scores do not depend on the order in which
// triples are handed in, bit for bit.

#ifndef ESUM_MODEL_HPP_
#define ESUM_MODEL_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "esum/dataset.hpp"
#include "esum/neural.hpp"
#include "esum/text.hpp"

namespace esum {

struct ModelConfig {
  std::size_t embed_dim = 300;
  std::vector<std::size_t> candidate_hidden = {64, 64};
  std::vector<std::size_t> context_hidden = {64, 64};
  std::vector<std::size_t> scorer_hidden = {64, 64, 64};
  std::uint64_t seed = 0;

  std::size_t triple_dim() const { return 2 * embed_dim; }
  // Throws Error(kUsage) on a non-positive or empty dimension, or when the
  // candidate and context outputs differ in width.
  void Validate() const;
};

// Initial representation of one candidate: [Embedding(prop); Embedding(val)].
struct TripleVector {
  TripleId id = 0;
  Vec values;
};

TripleVector EncodeTriple(const Triple &t, const EmbeddingStore &store);
std::vector<TripleVector> EncodeDescription(const EntityDescription &desc,
                                            const EmbeddingStore &store);

class ScoredDescription {
 public:
  Resource entity;
  // Candidate ids in ascending order; scores[i] belongs to ids[i].
  std::vector<TripleId> ids;
  std::vector<double> scores;
  // attention[c][i]: weight of context triple ids[i] for candidate ids[c].
  // Empty when diagnostics were not requested.
  std::vector<Vec> attention;

  std::size_t size() const { return ids.size(); }
  double ScoreOf(TripleId id) const;
};

class SummarizerModel {
 public:
  SummarizerModel() = default;
  // Glorot-uniform weights and zero biases drawn from config.seed.
  explicit SummarizerModel(const ModelConfig &config);
  SummarizerModel(ModelConfig config, Mlp candidate, Mlp context, Mlp scorer);

  const ModelConfig &config() const { return config_; }
  const Mlp &candidate_mlp() const { return candidate_; }
  const Mlp &context_mlp() const { return context_; }
  const Mlp &scorer_mlp() const { return scorer_; }
  Mlp &candidate_mlp() { return candidate_; }
  Mlp &context_mlp() { return context_; }
  Mlp &scorer_mlp() { return scorer_; }

  // Scores every triple of a description against the whole description.
  // Throws Error(kShapeMismatch) on empty input or wrong vector lengths.
  ScoredDescription Score(std::span<const TripleVector> triples,
                          bool keep_attention = true) const;

  // Mean squared error of the scores against targets (indexed like the
  // id-sorted candidates), with parameter gradients accumulated into grads.
  // Returns the loss.
  double LossAndGradient(std::span<const TripleVector> triples,
                         std::span<const double> targets,
                         std::vector<GradientTape> &grads) const;

  std::vector<GradientTape> MakeTapes() const;

  // Blocks of all three MLPs: candidate, context, scorer.
  std::vector<std::span<double>> ParameterBlocks();
  static std::vector<std::span<double>> TapeBlocks(
      std::vector<GradientTape> &tapes);

  std::size_t ParameterCount() const;

 private:
  ModelConfig config_;
  Mlp candidate_;
  Mlp context_;
  Mlp scorer_;
};

// The min(k, n) best-scoring ids, sorted by descending score then ascending
// id.
std::vector<TripleId> SelectSummary(const ScoredDescription &scored, int k);

// Versioned text checkpoint. Numbers are written in shortest round-trip form
// so a save/load cycle reproduces every parameter bit for bit.
inline constexpr int kCheckpointVersion = 1;
void SaveCheckpoint(const SummarizerModel &model,
                    const std::filesystem::path &path);
void WriteCheckpoint(const SummarizerModel &model, std::ostream &out);
// Throws Error(kVersionMismatch), Error(kCorruptCheckpoint),
// Error(kMissingFile).
SummarizerModel LoadCheckpoint(const std::filesystem::path &path);
SummarizerModel ReadCheckpoint(std::string_view text);

// "entity_iri<TAB>triple_id<TAB>score<TAB>selected" rows, no header.
void WriteScoresTsv(const ScoredDescription &scored, int k, std::ostream &out);

std::string FormatDouble(double value);

}  // namespace esum

#endif  // ESUM_MODEL_HPP_
