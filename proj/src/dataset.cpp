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

#include "esum/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "esum/error.hpp"
#include "json.hpp"

namespace esum {

namespace {

using json = nlohmann::json;

bool IsSpace(char c) { return c == ' ' || c == '\t'; }

void AppendUtf8(std::string &out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

// Cursor over one statement line.
class LineParser {
 public:
  LineParser(std::string_view line, std::size_t line_no)
      : line_(line), line_no_(line_no) {}

  [[noreturn]] void Fail(const std::string &what) const {
    throw LineError(ErrorCode::kMalformedLine, line_no_,
                    "line " + std::to_string(line_no_) + ": " + what);
  }

  void SkipSpace() {
    while (pos_ < line_.size() && IsSpace(line_[pos_])) ++pos_;
  }

  bool AtEnd() const { return pos_ >= line_.size(); }
  char Peek() const { return AtEnd() ? '\0' : line_[pos_]; }

  Resource Term(bool allow_literal, bool allow_bnode) {
    SkipSpace();
    if (AtEnd()) Fail("unexpected end of statement");
    char c = Peek();
    if (c == '<') return Iri();
    if (c == '_' && allow_bnode) return BlankNode();
    if (c == '"' && allow_literal) return Literal();
    Fail(std::string("unexpected character '") + c + "'");
  }

  void EndOfStatement() {
    SkipSpace();
    if (Peek() != '.') Fail("missing terminating '.'");
    ++pos_;
    SkipSpace();
    if (!AtEnd() && Peek() != '#') Fail("trailing characters after '.'");
  }

 private:
  std::string IriBody() {
    // Peek() == '<'
    ++pos_;
    std::size_t end = line_.find('>', pos_);
    if (end == std::string_view::npos) Fail("unterminated IRI");
    std::string_view body = line_.substr(pos_, end - pos_);
    if (body.empty()) Fail("empty IRI");
    for (char ch : body) {
      if (ch == ' ' || ch == '<' || ch == '"' || ch == '\t') {
        Fail("invalid character in IRI");
      }
    }
    pos_ = end + 1;
    return std::string(body);
  }

  Resource Iri() {
    Resource r;
    r.kind = Resource::Kind::kIri;
    r.raw = IriBody();
    return r;
  }

  Resource BlankNode() {
    if (line_.substr(pos_, 2) != "_:") Fail("malformed blank node");
    pos_ += 2;
    std::size_t start = pos_;
    while (pos_ < line_.size() && !IsSpace(line_[pos_]) && line_[pos_] != '.' &&
           line_[pos_] != '<' && line_[pos_] != '"') {
      ++pos_;
    }
    if (pos_ == start) Fail("empty blank node label");
    Resource r;
    r.kind = Resource::Kind::kBlankNode;
    r.raw = std::string(line_.substr(start, pos_ - start));
    return r;
  }

  std::uint32_t Hex(std::size_t digits) {
    if (pos_ + digits > line_.size()) Fail("truncated unicode escape");
    std::uint32_t value = 0;
    auto begin = line_.data() + pos_;
    auto [ptr, ec] = std::from_chars(begin, begin + digits, value, 16);
    if (ec != std::errc() || ptr != begin + digits) {
      Fail("bad unicode escape");
    }
    pos_ += digits;
    return value;
  }

  Resource Literal() {
    ++pos_;  // opening quote
    std::string lexical;
    bool closed = false;
    while (pos_ < line_.size()) {
      char ch = line_[pos_++];
      if (ch == '"') {
        closed = true;
        break;
      }
      if (ch != '\\') {
        lexical += ch;
        continue;
      }
      if (AtEnd()) Fail("dangling escape");
      char esc = line_[pos_++];
      switch (esc) {
        case 't': lexical += '\t'; break;
        case 'b': lexical += '\b'; break;
        case 'n': lexical += '\n'; break;
        case 'r': lexical += '\r'; break;
        case 'f': lexical += '\f'; break;
        case '"': lexical += '"'; break;
        case '\'': lexical += '\''; break;
        case '\\': lexical += '\\'; break;
        case 'u': AppendUtf8(lexical, Hex(4)); break;
        case 'U': AppendUtf8(lexical, Hex(8)); break;
        default: Fail(std::string("unknown escape \\") + esc);
      }
    }
    if (!closed) Fail("unterminated literal");
    Resource r;
    r.kind = Resource::Kind::kLiteral;
    r.raw = std::move(lexical);
    if (Peek() == '@') {
      ++pos_;
      std::size_t start = pos_;
      while (pos_ < line_.size() &&
             (std::isalnum(static_cast<unsigned char>(line_[pos_])) ||
              line_[pos_] == '-')) {
        ++pos_;
      }
      if (pos_ == start) Fail("empty language tag");
      r.lang = std::string(line_.substr(start, pos_ - start));
    } else if (line_.substr(pos_, 2) == "^^") {
      pos_ += 2;
      if (Peek() != '<') Fail("datatype must be an IRI");
      r.datatype = IriBody();
    }
    return r;
  }

  std::string_view line_;
  std::size_t line_no_;
  std::size_t pos_ = 0;
};

std::string EscapeLiteral(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out;
}

std::string StatementKey(const Resource &s, const Resource &p,
                         const Resource &o) {
  return s.ToNTriples() + " " + p.ToNTriples() + " " + o.ToNTriples();
}

template <typename Fn>
void ForEachLine(std::string_view text, Fn &&fn) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    fn(line, line_no);
    if (end == text.size()) break;
    start = end + 1;
  }
}

bool IsEntity(const Resource &r, std::string_view iri) {
  return r.kind == Resource::Kind::kIri && r.raw == iri;
}

std::string_view StripBrackets(std::string_view iri) {
  if (iri.size() >= 2 && iri.front() == '<' && iri.back() == '>') {
    return iri.substr(1, iri.size() - 2);
  }
  return iri;
}

}  // namespace

std::string Resource::ToNTriples() const {
  switch (kind) {
    case Kind::kIri: return "<" + raw + ">";
    case Kind::kBlankNode: return "_:" + raw;
    case Kind::kLiteral: {
      std::string out = "\"" + EscapeLiteral(raw) + "\"";
      if (!lang.empty()) {
        out += "@" + lang;
      } else if (!datatype.empty()) {
        out += "^^<" + datatype + ">";
      }
      return out;
    }
  }
  return raw;
}

std::string Triple::Key() const {
  return StatementKey(subject, predicate, object);
}

bool GoldSummary::Contains(TripleId id) const {
  return std::binary_search(triple_ids.begin(), triple_ids.end(), id);
}

const std::vector<GoldSummary> &EntityDescription::GoldFor(int k) const {
  auto it = gold.find(k);
  if (it == gold.end() || it->second.empty()) {
    throw Error(ErrorCode::kNoGoldForK, "entity " + entity.raw +
                                            " has no gold summaries for k=" +
                                            std::to_string(k));
  }
  return it->second;
}

std::size_t DatasetManifest::EntityIndex(std::string_view iri) const {
  for (std::size_t i = 0; i < entities.size(); ++i) {
    if (entities[i].entity.raw == iri) return i;
  }
  throw Error(ErrorCode::kUnknownEntity,
              "unknown entity " + std::string(iri));
}

const EntityDescription &DatasetManifest::Entity(std::string_view iri) const {
  return entities[EntityIndex(iri)];
}

std::size_t DatasetManifest::TripleCount() const {
  std::size_t total = 0;
  for (const auto &e : entities) total += e.triples.size();
  return total;
}

std::size_t DatasetManifest::GoldCount() const {
  std::size_t total = 0;
  for (const auto &e : entities) {
    for (const auto &[k, golds] : e.gold) total += golds.size();
  }
  return total;
}

std::optional<Statement> ParseStatementLine(std::string_view line,
                                            std::size_t line_no) {
  std::size_t first = line.find_first_not_of(" \t");
  if (first == std::string_view::npos || line[first] == '#') {
    return std::nullopt;
  }
  LineParser parser(line, line_no);
  Statement st;
  st.subject = parser.Term(/*allow_literal=*/false, /*allow_bnode=*/true);
  st.predicate = parser.Term(false, false);
  st.object = parser.Term(true, true);
  parser.EndOfStatement();
  return st;
}

std::vector<Triple> ParseTriplesDocument(std::string_view text,
                                         std::string_view entity_iri) {
  entity_iri = StripBrackets(entity_iri);
  std::vector<Triple> triples;
  // First label per resource, keyed by its N-Triples form.
  std::unordered_map<std::string, std::string> labels;

  ForEachLine(text, [&](std::string_view line, std::size_t line_no) {
    auto st = ParseStatementLine(line, line_no);
    if (!st) return;
    if (st->predicate.raw == kRdfsLabel && st->object.is_literal()) {
      labels.try_emplace(st->subject.ToNTriples(), st->object.raw);
    }
    bool subj = IsEntity(st->subject, entity_iri);
    bool obj = IsEntity(st->object, entity_iri);
    // Self-loops have no value distinct from the entity.
    if (subj == obj) return;
    Triple t;
    t.id = static_cast<TripleId>(triples.size());
    t.subject = std::move(st->subject);
    t.predicate = std::move(st->predicate);
    t.object = std::move(st->object);
    t.entity_is_object = obj;
    triples.push_back(std::move(t));
  });

  if (triples.empty()) {
    throw Error(ErrorCode::kEmptyDescription,
                "no statements about " + std::string(entity_iri));
  }
  auto annotate = [&](Resource &r) {
    if (r.is_literal()) return;
    auto it = labels.find(r.ToNTriples());
    if (it != labels.end()) r.label = it->second;
  };
  for (auto &t : triples) {
    annotate(t.subject);
    annotate(t.predicate);
    annotate(t.object);
  }
  return triples;
}

std::vector<TripleId> MatchGoldDocument(std::string_view text,
                                        const std::vector<Triple> &triples,
                                        const std::string &source) {
  std::unordered_map<std::string, std::vector<TripleId>> by_key;
  for (const auto &t : triples) by_key[t.Key()].push_back(t.id);

  std::unordered_map<std::string, std::size_t> used;
  std::vector<TripleId> ids;
  ForEachLine(text, [&](std::string_view line, std::size_t line_no) {
    auto st = ParseStatementLine(line, line_no);
    if (!st) return;
    std::string key = StatementKey(st->subject, st->predicate, st->object);
    auto it = by_key.find(key);
    if (it == by_key.end()) {
      throw Error(ErrorCode::kGoldNotSubset,
                  source + ":" + std::to_string(line_no) +
                      ": statement not in description: " + key);
    }
    // Duplicate candidates are consumed in document order.
    std::size_t &n = used[key];
    ids.push_back(it->second[std::min(n, it->second.size() - 1)]);
    ++n;
  });
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

void ValidateGold(const EntityDescription &desc) {
  for (const auto &[k, golds] : desc.gold) {
    for (const auto &g : golds) {
      if (g.triple_ids.size() > static_cast<std::size_t>(k)) {
        throw Error(ErrorCode::kGoldTooLarge,
                    "gold '" + g.annotator + "' of " + desc.entity.raw +
                        " has " + std::to_string(g.triple_ids.size()) +
                        " triples, more than k=" + std::to_string(k));
      }
      for (TripleId id : g.triple_ids) {
        if (id < 0 || static_cast<std::size_t>(id) >= desc.triples.size()) {
          throw Error(ErrorCode::kGoldNotSubset,
                      "gold '" + g.annotator + "' of " + desc.entity.raw +
                          " references unknown triple " + std::to_string(id));
        }
      }
    }
  }
}

void ValidateFold(const FoldSpec &fold, const DatasetManifest &manifest) {
  auto fail = [&](const std::string &what) {
    throw Error(ErrorCode::kInvalidFold,
                "fold " + std::to_string(fold.index) + ": " + what);
  };
  if (fold.train.empty()) fail("empty train list");
  if (fold.test.empty()) fail("empty test list");

  auto as_set = [&](const std::vector<std::string> &list, const char *name) {
    std::set<std::string> s;
    for (const auto &iri : list) {
      bool known = std::any_of(
          manifest.entities.begin(), manifest.entities.end(),
          [&](const EntityDescription &e) { return e.entity.raw == iri; });
      if (!known) fail(std::string(name) + " lists unknown entity " + iri);
      if (!s.insert(iri).second) {
        fail(std::string(name) + " lists " + iri + " twice");
      }
    }
    return s;
  };
  auto train = as_set(fold.train, "train");
  auto valid = as_set(fold.valid, "valid");
  auto test = as_set(fold.test, "test");
  for (const auto &iri : valid) {
    if (train.count(iri)) fail(iri + " is in both train and valid");
  }
  for (const auto &iri : test) {
    if (train.count(iri)) fail(iri + " is in both train and test");
    if (valid.count(iri)) fail(iri + " is in both valid and test");
  }
  for (const auto &e : manifest.entities) {
    const auto &iri = e.entity.raw;
    if (!train.count(iri) && !valid.count(iri) && !test.count(iri)) {
      fail(iri + " is not assigned to train, valid or test");
    }
  }
}

std::string ReadFile(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kMissingFile, "cannot open " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

DatasetManifest LoadManifest(const std::filesystem::path &path) {
  std::string text = ReadFile(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception &e) {
    throw Error(ErrorCode::kInvalidManifest,
                path.string() + ": " + std::string(e.what()));
  }
  std::filesystem::path base = path.parent_path();
  auto resolve = [&](const std::string &p) {
    std::filesystem::path fp(p);
    return fp.is_absolute() ? fp : base / fp;
  };

  DatasetManifest manifest;
  try {
    manifest.name = doc.value("name", path.stem().string());
    std::set<std::string> seen;
    for (const auto &ej : doc.at("entities")) {
      EntityDescription desc;
      desc.entity.kind = Resource::Kind::kIri;
      desc.entity.raw = std::string(StripBrackets(ej.at("iri").get<std::string>()));
      if (!seen.insert(desc.entity.raw).second) {
        throw Error(ErrorCode::kInvalidManifest,
                    "duplicate entity " + desc.entity.raw);
      }
      auto desc_path = resolve(ej.at("desc_file").get<std::string>());
      desc.triples = ParseTriplesDocument(ReadFile(desc_path), desc.entity.raw);

      if (ej.contains("gold")) {
        for (const auto &[key, list] : ej.at("gold").items()) {
          int k = 0;
          auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), k);
          if (ec != std::errc() || ptr != key.data() + key.size() || k < 1) {
            throw Error(ErrorCode::kInvalidManifest,
                        "gold key '" + key + "' is not a positive integer");
          }
          auto &slot = desc.gold[k];
          for (const auto &gj : list) {
            auto gold_path = resolve(gj.at("file").get<std::string>());
            GoldSummary g;
            g.annotator = gj.value("annotator", gold_path.stem().string());
            g.triple_ids = MatchGoldDocument(ReadFile(gold_path), desc.triples,
                                             gold_path.string());
            slot.push_back(std::move(g));
          }
        }
      }
      ValidateGold(desc);
      manifest.entities.push_back(std::move(desc));
    }
    if (doc.contains("folds")) {
      std::set<int> indices;
      for (const auto &fj : doc.at("folds")) {
        FoldSpec fold;
        fold.index = fj.at("index").get<int>();
        if (!indices.insert(fold.index).second) {
          throw Error(ErrorCode::kInvalidFold,
                      "fold " + std::to_string(fold.index) + ": duplicate index");
        }
        auto list = [&](const char *name) {
          std::vector<std::string> out;
          if (!fj.contains(name)) return out;
          for (const auto &v : fj.at(name)) {
            out.emplace_back(StripBrackets(v.get<std::string>()));
          }
          return out;
        };
        fold.train = list("train");
        fold.valid = list("valid");
        fold.test = list("test");
        ValidateFold(fold, manifest);
        manifest.folds.push_back(std::move(fold));
      }
    }
  } catch (const json::exception &e) {
    throw Error(ErrorCode::kInvalidManifest,
                path.string() + ": " + std::string(e.what()));
  }
  return manifest;
}

std::vector<int> GoldMembershipCounts(const EntityDescription &desc, int k) {
  const auto &golds = desc.GoldFor(k);
  std::vector<int> counts(desc.triples.size(), 0);
  for (const auto &g : golds) {
    for (TripleId id : g.triple_ids) ++counts[id];
  }
  return counts;
}

double SupervisionLabel(const EntityDescription &desc, const Triple &t, int k,
                        LabelMode mode) {
  const auto &golds = desc.GoldFor(k);
  int hits = 0;
  for (const auto &g : golds) hits += g.Contains(t.id) ? 1 : 0;
  if (mode == LabelMode::kBinaryAny) return hits > 0 ? 1.0 : 0.0;
  return static_cast<double>(hits) / static_cast<double>(golds.size());
}

std::vector<double> SupervisionLabels(const EntityDescription &desc, int k,
                                      LabelMode mode) {
  auto counts = GoldMembershipCounts(desc, k);
  double m = static_cast<double>(desc.GoldFor(k).size());
  std::vector<double> labels(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    labels[i] = mode == LabelMode::kBinaryAny ? (counts[i] > 0 ? 1.0 : 0.0)
                                              : counts[i] / m;
  }
  return labels;
}

}  // namespace esum
