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

// Checkpoint layout (whitespace separated, one logical item per line):
//
//   esum-checkpoint <version>
//   embed_dim <n>
//   candidate_hidden <count> <dims...>
//   context_hidden <count> <dims...>
//   scorer_hidden <count> <dims...>
//   seed <n>
//   mlp <name> <layers>
//   layer <out> <in> <relu|linear>
//   <out rows of in weights>
//   <out biases>
//   ...
//   end

#include <cctype>
#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

#include "esum/error.hpp"
#include "esum/model.hpp"

namespace esum {

namespace {

constexpr std::string_view kMagic = "esum-checkpoint";

[[noreturn]] void Corrupt(const std::string &what) {
  throw Error(ErrorCode::kCorruptCheckpoint, "corrupt checkpoint: " + what);
}

void WriteDims(std::ostream &out, const char *name,
               const std::vector<std::size_t> &dims) {
  out << name << ' ' << dims.size();
  for (auto d : dims) out << ' ' << d;
  out << '\n';
}

void WriteMlp(std::ostream &out, const char *name, const Mlp &mlp) {
  out << "mlp " << name << ' ' << mlp.layers().size() << '\n';
  for (const auto &layer : mlp.layers()) {
    out << "layer " << layer.out_dim() << ' ' << layer.in_dim() << ' '
        << (layer.activation == Activation::kRelu ? "relu" : "linear") << '\n';
    for (std::size_t r = 0; r < layer.out_dim(); ++r) {
      for (std::size_t c = 0; c < layer.in_dim(); ++c) {
        if (c) out << ' ';
        out << FormatDouble(layer.weights(r, c));
      }
      out << '\n';
    }
    for (std::size_t r = 0; r < layer.out_dim(); ++r) {
      if (r) out << ' ';
      out << FormatDouble(layer.bias[r]);
    }
    out << '\n';
  }
}

class Tokens {
 public:
  explicit Tokens(std::string_view text) : text_(text) {}

  std::string_view Next() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    if (pos_ >= text_.size()) Corrupt("unexpected end of file");
    std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    return text_.substr(start, pos_ - start);
  }

  void Expect(std::string_view word) {
    auto tok = Next();
    if (tok != word) {
      Corrupt("expected '" + std::string(word) + "', found '" + std::string(tok) + "'");
    }
  }

  template <typename T>
  T Number() {
    auto tok = Next();
    T value{};
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
      Corrupt("bad number '" + std::string(tok) + "'");
    }
    return value;
  }

  bool AtEnd() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    return pos_ >= text_.size();
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

std::vector<std::size_t> ReadDims(Tokens &tokens, const char *name) {
  tokens.Expect(name);
  auto count = tokens.Number<std::size_t>();
  if (count == 0 || count > 64) Corrupt(std::string(name) + " layer count");
  std::vector<std::size_t> dims(count);
  for (auto &d : dims) d = tokens.Number<std::size_t>();
  return dims;
}

Mlp ReadMlp(Tokens &tokens, const char *name) {
  tokens.Expect("mlp");
  tokens.Expect(name);
  auto count = tokens.Number<std::size_t>();
  if (count == 0 || count > 64) Corrupt(std::string(name) + " layer count");
  std::vector<DenseLayer> layers;
  for (std::size_t l = 0; l < count; ++l) {
    tokens.Expect("layer");
    auto out = tokens.Number<std::size_t>();
    auto in = tokens.Number<std::size_t>();
    if (out == 0 || in == 0 || out > (1u << 20) || in > (1u << 20)) {
      Corrupt("layer shape");
    }
    auto act = tokens.Next();
    DenseLayer layer;
    if (act == "relu") {
      layer.activation = Activation::kRelu;
    } else if (act == "linear") {
      layer.activation = Activation::kLinear;
    } else {
      Corrupt("unknown activation '" + std::string(act) + "'");
    }
    layer.weights = Matrix(out, in);
    for (double &w : layer.weights.data()) w = tokens.Number<double>();
    layer.bias.resize(out);
    for (double &b : layer.bias) b = tokens.Number<double>();
    layers.push_back(std::move(layer));
  }
  try {
    return Mlp(std::move(layers));
  } catch (const Error &e) {
    Corrupt(e.what());
  }
}

}  // namespace

void WriteCheckpoint(const SummarizerModel &model, std::ostream &out) {
  const auto &cfg = model.config();
  out << kMagic << ' ' << kCheckpointVersion << '\n';
  out << "embed_dim " << cfg.embed_dim << '\n';
  WriteDims(out, "candidate_hidden", cfg.candidate_hidden);
  WriteDims(out, "context_hidden", cfg.context_hidden);
  WriteDims(out, "scorer_hidden", cfg.scorer_hidden);
  out << "seed " << cfg.seed << '\n';
  WriteMlp(out, "candidate", model.candidate_mlp());
  WriteMlp(out, "context", model.context_mlp());
  WriteMlp(out, "scorer", model.scorer_mlp());
  out << "end\n";
}

void SaveCheckpoint(const SummarizerModel &model,
                    const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  WriteCheckpoint(model, out);
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

SummarizerModel ReadCheckpoint(std::string_view text) {
  Tokens tokens(text);
  if (tokens.AtEnd()) Corrupt("empty file");
  auto magic = tokens.Next();
  if (magic != kMagic) Corrupt("not a checkpoint file");
  auto version = tokens.Number<int>();
  if (version != kCheckpointVersion) {
    throw Error(ErrorCode::kVersionMismatch,
                "checkpoint version " + std::to_string(version) +
                    ", this build reads version " +
                    std::to_string(kCheckpointVersion));
  }
  ModelConfig cfg;
  tokens.Expect("embed_dim");
  cfg.embed_dim = tokens.Number<std::size_t>();
  cfg.candidate_hidden = ReadDims(tokens, "candidate_hidden");
  cfg.context_hidden = ReadDims(tokens, "context_hidden");
  cfg.scorer_hidden = ReadDims(tokens, "scorer_hidden");
  tokens.Expect("seed");
  cfg.seed = tokens.Number<std::uint64_t>();
  Mlp candidate = ReadMlp(tokens, "candidate");
  Mlp context = ReadMlp(tokens, "context");
  Mlp scorer = ReadMlp(tokens, "scorer");
  tokens.Expect("end");
  if (!tokens.AtEnd()) Corrupt("trailing data after 'end'");
  try {
    return SummarizerModel(std::move(cfg), std::move(candidate),
                           std::move(context), std::move(scorer));
  } catch (const Error &e) {
    Corrupt(e.what());
  }
}

SummarizerModel LoadCheckpoint(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kMissingFile, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return ReadCheckpoint(buf.str());
}

}  // namespace esum
