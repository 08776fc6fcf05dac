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

// Entity descriptions, gold summaries and cross-validation folds.
//
// An entity description is the set of triples in which the entity occurs as
// subject or object. Each triple is viewed as a property-value pair of the
// entity: prop is the predicate, val is the end of the statement that is not
// the entity. Descriptions are read from a line-oriented N-Triples subset and
// grouped into a dataset by a JSON manifest (see LoadManifest).

#ifndef ESUM_DATASET_HPP_
#define ESUM_DATASET_HPP_

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace esum {

inline constexpr std::string_view kRdfsLabel =
    "http://www.w3.org/2000/01/rdf-schema#label";

struct Resource {
  enum class Kind { kIri, kBlankNode, kLiteral };

  Kind kind = Kind::kIri;
  // Full IRI (without angle brackets), blank node id (without "_:") or the
  // unescaped lexical form of a literal.
  std::string raw;
  // rdfs:label of an IRI or blank node, when the input provides one.
  std::optional<std::string> label;
  // Language tag or datatype IRI of a literal; empty otherwise.
  std::string lang;
  std::string datatype;

  // Term exactly as it is written in N-Triples, used for statement matching.
  std::string ToNTriples() const;

  bool is_literal() const { return kind == Kind::kLiteral; }
};

using TripleId = int;

struct Triple {
  TripleId id = 0;
  Resource subject;
  Resource predicate;
  Resource object;
  // True when the described entity is the object, i.e. val is the subject.
  bool entity_is_object = false;

  const Resource &prop() const { return predicate; }
  const Resource &val() const { return entity_is_object ? subject : object; }

  // "<s> <p> <o>" key used to match gold statements to candidates.
  std::string Key() const;
};

struct GoldSummary {
  std::string annotator;
  // Sorted, duplicate-free.
  std::vector<TripleId> triple_ids;

  bool Contains(TripleId id) const;
};

struct EntityDescription {
  Resource entity;
  std::vector<Triple> triples;
  std::map<int, std::vector<GoldSummary>> gold;

  std::size_t size() const { return triples.size(); }
  // Throws Error(kNoGoldForK) when slot k is absent or empty.
  const std::vector<GoldSummary> &GoldFor(int k) const;
};

struct FoldSpec {
  int index = 0;
  std::vector<std::string> train;
  std::vector<std::string> valid;
  std::vector<std::string> test;
};

struct DatasetManifest {
  std::string name;
  std::vector<EntityDescription> entities;
  std::vector<FoldSpec> folds;

  // Throws Error(kUnknownEntity).
  const EntityDescription &Entity(std::string_view iri) const;
  std::size_t EntityIndex(std::string_view iri) const;
  std::size_t TripleCount() const;
  std::size_t GoldCount() const;
};

// Parses a description document and keeps the statements that touch
// entity_iri. rdfs:label statements about other resources only annotate
// labels; the first label of a resource in document order wins. Ids follow
// document order from 0. Duplicate statements stay distinct candidates.
//
// Throws LineError(kMalformedLine) and Error(kEmptyDescription).
std::vector<Triple> ParseTriplesDocument(std::string_view text,
                                         std::string_view entity_iri);

// One statement of the N-Triples subset. Returns nullopt for blank and
// comment lines; throws LineError(kMalformedLine) otherwise.
struct Statement {
  Resource subject;
  Resource predicate;
  Resource object;
};
std::optional<Statement> ParseStatementLine(std::string_view line,
                                            std::size_t line_no);

// Matches each statement of a gold document against the description by
// subject/predicate/object equality. Throws Error(kGoldNotSubset).
std::vector<TripleId> MatchGoldDocument(std::string_view text,
                                        const std::vector<Triple> &triples,
                                        const std::string &source);

// Checks the structural invariants of a fold against the manifest entities.
// Train, valid and test must be pairwise disjoint; valid may be
// empty. Throws Error(kInvalidFold) naming the fold index.
void ValidateFold(const FoldSpec &fold, const DatasetManifest &manifest);

// Checks gold sizes and membership. Throws kGoldNotSubset / kGoldTooLarge.
void ValidateGold(const EntityDescription &desc);

// Loads a manifest file. Relative paths inside the manifest resolve against
// the manifest's directory.
//
//   {"name": "...",
//    "entities": [{"iri": "...", "desc_file": "...",
//                  "gold": {"5": [{"annotator": "...", "file": "..."}]}}],
//    "folds": [{"index": 0, "train": [...], "valid": [...], "test": [...]}]}
DatasetManifest LoadManifest(const std::filesystem::path &path);

// Supervision target for triple t under gold slot k.
enum class LabelMode {
  // Fraction of the gold summaries in slot k that contain t.
  kFrequency,
  // 1 when at least one gold summary contains t.
  kBinaryAny,
};

double SupervisionLabel(const EntityDescription &desc, const Triple &t, int k,
                        LabelMode mode = LabelMode::kFrequency);

// Labels for every candidate, indexed by triple id.
std::vector<double> SupervisionLabels(const EntityDescription &desc, int k,
                                      LabelMode mode = LabelMode::kFrequency);

// Number of gold summaries in slot k containing each triple, by triple id.
std::vector<int> GoldMembershipCounts(const EntityDescription &desc, int k);

std::string ReadFile(const std::filesystem::path &path);

}  // namespace esum

#endif  // ESUM_DATASET_HPP_
