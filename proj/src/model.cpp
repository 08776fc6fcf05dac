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

#include "esum/model.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <ostream>
#include <set>

#include "esum/error.hpp"

namespace esum {

namespace {

[[noreturn]] void ShapeError(const std::string &what) {
  throw Error(ErrorCode::kShapeMismatch, what);
}

std::vector<std::size_t> Dims(std::size_t in, const std::vector<std::size_t> &hidden,
                              std::size_t out = 0) {
  std::vector<std::size_t> dims{in};
  dims.insert(dims.end(), hidden.begin(), hidden.end());
  if (out) dims.push_back(out);
  return dims;
}

// Indices of triples sorted by ascending id; rejects duplicates and vectors of
// the wrong length.
std::vector<std::size_t> IdOrder(std::span<const TripleVector> triples,
                                 std::size_t expected_dim) {
  if (triples.empty()) ShapeError("cannot score an empty description");
  for (const auto &t : triples) {
    if (t.values.size() != expected_dim) {
      ShapeError("triple " + std::to_string(t.id) + " has " +
                 std::to_string(t.values.size()) +
                 " values, the model expects " + std::to_string(expected_dim));
    }
  }
  std::vector<std::size_t> order(triples.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return triples[a].id < triples[b].id;
  });
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (triples[order[i]].id == triples[order[i - 1]].id) {
      ShapeError("duplicate triple id " + std::to_string(triples[order[i]].id));
    }
  }
  return order;
}

Vec Concat(std::span<const double> a, std::span<const double> b) {
  Vec out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

}  // namespace

void ModelConfig::Validate() const {
  auto positive = [](const std::vector<std::size_t> &dims, const char *name) {
    if (dims.empty()) {
      throw Error(ErrorCode::kUsage, std::string(name) + " has no layers");
    }
    for (auto d : dims) {
      if (d == 0) throw Error(ErrorCode::kUsage, std::string(name) + " has a zero-width layer");
    }
  };
  if (embed_dim == 0) throw Error(ErrorCode::kUsage, "embed_dim must be positive");
  positive(candidate_hidden, "candidate_hidden");
  positive(context_hidden, "context_hidden");
  positive(scorer_hidden, "scorer_hidden");
  if (candidate_hidden.back() != context_hidden.back()) {
    throw Error(ErrorCode::kUsage,
                "candidate and context outputs must have the same width");
  }
}

TripleVector EncodeTriple(const Triple &t, const EmbeddingStore &store) {
  auto prop = EmbedResource(t.prop(), store);
  auto val = EmbedResource(t.val(), store);
  return {t.id, Concat(prop.vector, val.vector)};
}

std::vector<TripleVector> EncodeDescription(const EntityDescription &desc,
                                            const EmbeddingStore &store) {
  std::vector<TripleVector> out;
  out.reserve(desc.triples.size());
  for (const auto &t : desc.triples) out.push_back(EncodeTriple(t, store));
  return out;
}

double ScoredDescription::ScoreOf(TripleId id) const {
  auto it = std::lower_bound(ids.begin(), ids.end(), id);
  if (it == ids.end() || *it != id) {
    throw Error(ErrorCode::kUsage, "no score for triple " + std::to_string(id));
  }
  return scores[static_cast<std::size_t>(it - ids.begin())];
}

SummarizerModel::SummarizerModel(const ModelConfig &config) : config_(config) {
  config_.Validate();
  std::mt19937_64 rng(config_.seed);
  candidate_ = Mlp::Create(Dims(config_.triple_dim(), config_.candidate_hidden),
                           Activation::kRelu, Activation::kRelu, rng);
  context_ = Mlp::Create(Dims(config_.triple_dim(), config_.context_hidden),
                         Activation::kRelu, Activation::kRelu, rng);
  scorer_ = Mlp::Create(
      Dims(config_.candidate_hidden.back() + config_.context_hidden.back(),
           config_.scorer_hidden, 1),
      Activation::kRelu, Activation::kLinear, rng);
}

SummarizerModel::SummarizerModel(ModelConfig config, Mlp candidate, Mlp context,
                                 Mlp scorer)
    : config_(std::move(config)),
      candidate_(std::move(candidate)),
      context_(std::move(context)),
      scorer_(std::move(scorer)) {
  config_.Validate();
  auto expect = [](const Mlp &mlp, const std::vector<std::size_t> &dims,
                   const char *name) {
    const auto &layers = mlp.layers();
    bool ok = layers.size() + 1 == dims.size();
    for (std::size_t i = 0; ok && i < layers.size(); ++i) {
      ok = layers[i].in_dim() == dims[i] && layers[i].out_dim() == dims[i + 1];
    }
    if (!ok) ShapeError(std::string(name) + " MLP does not match the config");
  };
  expect(candidate_, Dims(config_.triple_dim(), config_.candidate_hidden),
         "candidate");
  expect(context_, Dims(config_.triple_dim(), config_.context_hidden), "context");
  expect(scorer_,
         Dims(config_.candidate_hidden.back() + config_.context_hidden.back(),
              config_.scorer_hidden, 1),
         "scorer");
}

ScoredDescription SummarizerModel::Score(std::span<const TripleVector> triples,
                                         bool keep_attention) const {
  auto order = IdOrder(triples, config_.triple_dim());
  std::size_t n = order.size();

  std::vector<Vec> h(n), g(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto &t = triples[order[i]].values;
    h[i] = candidate_.Forward(t);
    g[i] = context_.Forward(t);
  }

  ScoredDescription out;
  out.ids.resize(n);
  out.scores.resize(n);
  if (keep_attention) out.attention.resize(n);
  Vec cos(n);
  for (std::size_t c = 0; c < n; ++c) {
    out.ids[c] = triples[order[c]].id;
    for (std::size_t i = 0; i < n; ++i) cos[i] = Cosine(h[c], g[i]);
    Vec a = Softmax(cos);
    Vec d(g[0].size(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < d.size(); ++j) d[j] += a[i] * g[i][j];
    }
    out.scores[c] = scorer_.Forward(Concat(h[c], d))[0];
    if (keep_attention) out.attention[c] = std::move(a);
  }
  return out;
}

double SummarizerModel::LossAndGradient(std::span<const TripleVector> triples,
                                        std::span<const double> targets,
                                        std::vector<GradientTape> &grads) const {
  auto order = IdOrder(triples, config_.triple_dim());
  std::size_t n = order.size();
  if (targets.size() != n) {
    ShapeError("got " + std::to_string(targets.size()) + " targets for " +
               std::to_string(n) + " triples");
  }
  if (grads.size() != 3) ShapeError("expected three gradient tapes");

  std::vector<Vec> h(n), g(n);
  std::vector<MlpCache> h_cache(n), g_cache(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto &t = triples[order[i]].values;
    h[i] = candidate_.Forward(t, &h_cache[i]);
    g[i] = context_.Forward(t, &g_cache[i]);
  }

  std::vector<Vec> attention(n);
  std::vector<MlpCache> s_cache(n);
  Vec scores(n);
  Vec cos(n);
  std::size_t hd = h[0].size();
  std::size_t gd = g[0].size();
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t i = 0; i < n; ++i) cos[i] = Cosine(h[c], g[i]);
    attention[c] = Softmax(cos);
    Vec d(gd, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < gd; ++j) d[j] += attention[c][i] * g[i][j];
    }
    scores[c] = scorer_.Forward(Concat(h[c], d), &s_cache[c])[0];
  }

  auto mse = MseLoss(scores, targets);

  std::vector<Vec> dg(n, Vec(gd, 0.0));
  Vec da(n);
  for (std::size_t c = 0; c < n; ++c) {
    const double upstream[1] = {mse.grad[c]};
    Vec din = scorer_.Backward(s_cache[c], upstream, grads[2]);
    Vec dh(din.begin(), din.begin() + static_cast<std::ptrdiff_t>(hd));
    std::span<const double> dd(din.data() + hd, gd);
    const auto &a = attention[c];
    for (std::size_t i = 0; i < n; ++i) {
      da[i] = Dot(g[i], dd);
      for (std::size_t j = 0; j < gd; ++j) dg[i][j] += a[i] * dd[j];
    }
    Vec dcos = SoftmaxBackward(a, da);
    for (std::size_t i = 0; i < n; ++i) {
      CosineBackward(h[c], g[i], dcos[i], dh, dg[i]);
    }
    candidate_.Backward(h_cache[c], dh, grads[0]);
  }
  for (std::size_t i = 0; i < n; ++i) context_.Backward(g_cache[i], dg[i], grads[1]);
  return mse.loss;
}

std::vector<GradientTape> SummarizerModel::MakeTapes() const {
  return {candidate_.MakeTape(), context_.MakeTape(), scorer_.MakeTape()};
}

std::vector<std::span<double>> SummarizerModel::ParameterBlocks() {
  std::vector<std::span<double>> blocks;
  for (Mlp *mlp : {&candidate_, &context_, &scorer_}) {
    auto b = mlp->ParameterBlocks();
    blocks.insert(blocks.end(), b.begin(), b.end());
  }
  return blocks;
}

std::vector<std::span<double>> SummarizerModel::TapeBlocks(
    std::vector<GradientTape> &tapes) {
  std::vector<std::span<double>> blocks;
  for (auto &tape : tapes) {
    auto b = esum::TapeBlocks(tape);
    blocks.insert(blocks.end(), b.begin(), b.end());
  }
  return blocks;
}

std::size_t SummarizerModel::ParameterCount() const {
  std::size_t total = 0;
  for (const Mlp *mlp : {&candidate_, &context_, &scorer_}) {
    for (const auto &b : mlp->ParameterBlocks()) total += b.size();
  }
  return total;
}

std::vector<TripleId> SelectSummary(const ScoredDescription &scored, int k) {
  if (k < 1) throw Error(ErrorCode::kUsage, "k must be at least 1");
  std::vector<std::size_t> order(scored.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scored.scores[a] != scored.scores[b]) {
      return scored.scores[a] > scored.scores[b];
    }
    return scored.ids[a] < scored.ids[b];
  });
  order.resize(std::min(order.size(), static_cast<std::size_t>(k)));
  std::vector<TripleId> ids;
  for (auto i : order) ids.push_back(scored.ids[i]);
  return ids;
}

std::string FormatDouble(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

void WriteScoresTsv(const ScoredDescription &scored, int k, std::ostream &out) {
  auto picked = SelectSummary(scored, k);
  std::set<TripleId> selected(picked.begin(), picked.end());
  for (std::size_t i = 0; i < scored.size(); ++i) {
    out << scored.entity.raw << '\t' << scored.ids[i] << '\t'
        << FormatDouble(scored.scores[i]) << '\t'
        << (selected.count(scored.ids[i]) ? 1 : 0) << '\n';
  }
}

}  // namespace esum
