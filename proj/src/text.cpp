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

#include "esum/text.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

#include "esum/error.hpp"

namespace esum {

namespace {

bool IsWordByte(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
         (c >= 'A' && c <= 'Z') || c >= 0x80;
}

bool IsLower(unsigned char c) { return c >= 'a' && c <= 'z'; }
bool IsUpper(unsigned char c) { return c >= 'A' && c <= 'Z'; }

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char &c : out) {
    if (IsUpper(static_cast<unsigned char>(c))) c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::vector<std::string_view> SplitSpaces(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

bool ParseDouble(std::string_view s, double &out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool ParseSize(std::string_view s, std::size_t &out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

// Incremental .vec reader shared by file and in-memory loading.
class VecReader {
 public:
  explicit VecReader(const std::set<std::string> *vocabulary)
      : vocabulary_(vocabulary) {}

  // Returns true if the line was stored.
  bool Line(std::string_view line, std::size_t line_no) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' ||
                             line.back() == '\t')) {
      line.remove_suffix(1);
    }
    if (line.empty()) return false;
    auto fields = SplitSpaces(line);
    if (!seen_first_) {
      seen_first_ = true;
      std::size_t count = 0, dim = 0;
      if (fields.size() == 2 && ParseSize(fields[0], count) &&
          ParseSize(fields[1], dim)) {
        store_ = EmbeddingStore(dim);
        return false;
      }
      store_ = EmbeddingStore(fields.size() - 1);
    }
    if (vocabulary_ && !vocabulary_->count(Lower(fields[0]))) return false;
    if (fields.size() - 1 != store_.dim()) {
      throw LineError(ErrorCode::kDimMismatch, line_no,
                      "line " + std::to_string(line_no) + ": expected " +
                          std::to_string(store_.dim()) + " values, got " +
                          std::to_string(fields.size() - 1));
    }
    std::vector<double> values(store_.dim());
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (!ParseDouble(fields[i + 1], values[i])) {
        throw LineError(ErrorCode::kParseError, line_no,
                        "line " + std::to_string(line_no) +
                            ": not a number: " + std::string(fields[i + 1]));
      }
    }
    return store_.Add(fields[0], std::move(values));
  }

  EmbeddingStore Take() { return std::move(store_); }
  std::size_t dim() const { return store_.dim(); }

 private:
  const std::set<std::string> *vocabulary_;
  bool seen_first_ = false;
  EmbeddingStore store_;
};

}  // namespace

std::string TextualForm(const Resource &r) {
  if (r.is_literal()) return r.raw;
  if (r.label) return *r.label;
  std::size_t cut = r.raw.rfind('#');
  if (cut == std::string::npos) cut = r.raw.rfind('/');
  if (cut == std::string::npos) return r.raw;
  return r.raw.substr(cut + 1);
}

std::vector<std::string> Tokenize(std::string_view s) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  };
  unsigned char prev = 0;
  for (char ch : s) {
    auto c = static_cast<unsigned char>(ch);
    if (!IsWordByte(c)) {
      flush();
      prev = 0;
      continue;
    }
    if (IsUpper(c) && IsLower(prev)) flush();
    current += IsUpper(c) ? static_cast<char>(c - 'A' + 'a') : ch;
    prev = c;
  }
  flush();
  return tokens;
}

bool EmbeddingStore::Add(std::string_view word, std::vector<double> vector) {
  if (vector.size() != dim_) {
    throw Error(ErrorCode::kDimMismatch,
                "vector for '" + std::string(word) + "' has " +
                    std::to_string(vector.size()) + " values, store dim is " +
                    std::to_string(dim_));
  }
  std::string key = Lower(word);
  auto [it, inserted] = vectors_.try_emplace(key, std::move(vector));
  if (inserted) words_.push_back(std::move(key));
  return inserted;
}

const std::vector<double> *EmbeddingStore::Find(std::string_view word) const {
  auto it = vectors_.find(Lower(word));
  return it == vectors_.end() ? nullptr : &it->second;
}

ResourceEmbedding EmbedTokens(std::span<const std::string> tokens,
                              const EmbeddingStore &store) {
  ResourceEmbedding out;
  out.vector.assign(store.dim(), 0.0);
  out.total = static_cast<int>(tokens.size());
  for (const auto &token : tokens) {
    const auto *v = store.Find(token);
    if (!v) continue;
    for (std::size_t i = 0; i < v->size(); ++i) out.vector[i] += (*v)[i];
    ++out.covered;
  }
  if (out.covered > 0) {
    for (double &x : out.vector) x /= out.covered;
  }
  return out;
}

ResourceEmbedding EmbedResource(const Resource &r, const EmbeddingStore &store) {
  auto tokens = Tokenize(TextualForm(r));
  return EmbedTokens(tokens, store);
}

EmbeddingStore ParseVec(std::string_view text,
                        const std::set<std::string> *vocabulary) {
  VecReader reader(vocabulary);
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    reader.Line(text.substr(start, end - start), ++line_no);
    start = end + 1;
  }
  return reader.Take();
}

EmbeddingStore LoadVecFile(const std::filesystem::path &path,
                           const std::set<std::string> *vocabulary) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kMissingFile, "cannot open " + path.string());
  VecReader reader(vocabulary);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) reader.Line(line, ++line_no);
  return reader.Take();
}

std::set<std::string> LoadVocabularyFile(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kMissingFile, "cannot open " + path.string());
  std::set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    auto fields = SplitSpaces(line);
    for (auto f : fields) {
      while (!f.empty() && f.back() == '\r') f.remove_suffix(1);
      if (!f.empty()) words.insert(Lower(f));
    }
  }
  return words;
}

std::set<std::string> ManifestVocabulary(const DatasetManifest &manifest) {
  std::set<std::string> words;
  for (const auto &desc : manifest.entities) {
    for (const auto &t : desc.triples) {
      for (auto &tok : Tokenize(TextualForm(t.prop()))) words.insert(tok);
      for (auto &tok : Tokenize(TextualForm(t.val()))) words.insert(tok);
    }
  }
  return words;
}

std::size_t FilterVecFile(const std::filesystem::path &source,
                          const std::set<std::string> &vocabulary,
                          const std::filesystem::path &out) {
  std::ifstream in(source);
  if (!in) {
    throw Error(ErrorCode::kMissingFile, "cannot open " + source.string());
  }
  // Lines are validated by VecReader and copied verbatim, so the filtered
  // file parses to bit-identical vectors.
  VecReader reader(&vocabulary);
  std::ostringstream body;
  std::size_t written = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    if (reader.Line(line, ++line_no)) {
      while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) {
        line.pop_back();
      }
      body << line << '\n';
      ++written;
    }
  }
  std::ofstream os(out, std::ios::binary | std::ios::trunc);
  if (!os) throw Error(ErrorCode::kIo, "cannot write " + out.string());
  os << written << ' ' << reader.dim() << '\n' << body.str();
  if (!os) throw Error(ErrorCode::kIo, "write failed: " + out.string());
  return written;
}

}  // namespace esum
