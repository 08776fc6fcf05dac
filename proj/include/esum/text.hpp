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

// Textual forms of RDF resources and mean-of-word-vector embeddings.

#ifndef ESUM_TEXT_HPP_
#define ESUM_TEXT_HPP_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "esum/dataset.hpp"

namespace esum {

// Literal: lexical form. IRI or blank node: rdfs:label if present, else the
// local name (after the last '#', else after the last '/', else everything).
std::string TextualForm(const Resource &r);

// Splits on non-alphanumeric characters and at lower-to-upper camel-case
// boundaries, lowercasing every token. Bytes >= 0x80 count as word
// characters so UTF-8 words stay whole.
std::vector<std::string> Tokenize(std::string_view s);

// Word vectors keyed by lowercase word. Immutable once loaded.
class EmbeddingStore {
 public:
  explicit EmbeddingStore(std::size_t dim = 0) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return words_.size(); }

  // Returns false (and keeps the existing vector) if the lowercase word is
  // already present. Throws Error(kDimMismatch) on a wrong length.
  bool Add(std::string_view word, std::vector<double> vector);

  // Looks up the lowercase form of word.
  const std::vector<double> *Find(std::string_view word) const;

  // Words in insertion order.
  const std::vector<std::string> &words() const { return words_; }

 private:
  std::size_t dim_;
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::vector<double>> vectors_;
};

struct ResourceEmbedding {
  std::vector<double> vector;
  int covered = 0;
  int total = 0;
};

// Mean of the vectors of in-vocabulary tokens; out-of-vocabulary tokens do
// not count toward the denominator. No hits gives the zero vector.
ResourceEmbedding EmbedTokens(std::span<const std::string> tokens,
                              const EmbeddingStore &store);
ResourceEmbedding EmbedResource(const Resource &r, const EmbeddingStore &store);

// Reads the fastText .vec text format: an optional "count dim" header line
// followed by "word v1 ... v_dim" lines. When vocabulary is given only those
// (lowercase) words are kept. The first spelling of a case-folded word wins.
//
// Throws LineError(kDimMismatch) / LineError(kParseError), Error(kMissingFile).
EmbeddingStore LoadVecFile(const std::filesystem::path &path,
                           const std::set<std::string> *vocabulary = nullptr);
EmbeddingStore ParseVec(std::string_view text,
                        const std::set<std::string> *vocabulary = nullptr);

// One word per line; blank lines ignored; words lowercased.
std::set<std::string> LoadVocabularyFile(const std::filesystem::path &path);

// Token vocabulary of every prop/val textual form in the manifest.
std::set<std::string> ManifestVocabulary(const DatasetManifest &manifest);

// Writes the vectors of words in vocabulary (in the order they appear in the
// source file) to out in .vec format with a "count dim" header. Returns the
// number of vectors written.
std::size_t FilterVecFile(const std::filesystem::path &source,
                          const std::set<std::string> &vocabulary,
                          const std::filesystem::path &out);

}  // namespace esum

#endif  // ESUM_TEXT_HPP_
