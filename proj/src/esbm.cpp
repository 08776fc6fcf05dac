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

#include "esum/esbm.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

#include "esum/error.hpp"

namespace esum {

namespace {

namespace fs = std::filesystem;

struct EntityRow {
  std::string eid;
  std::string db;
  std::string iri;
};

std::vector<std::string> SplitTabs(const std::string &line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, '\t')) out.push_back(field);
  return out;
}

std::string Trim(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::vector<EntityRow> ReadEntityList(const fs::path &root) {
  std::istringstream in(ReadFile(root / "elist.txt"));
  std::vector<EntityRow> rows;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    line = Trim(line);
    if (line.empty()) continue;
    auto fields = SplitTabs(line);
    if (header) {
      header = false;
      if (!fields.empty() && fields[0] == "eid") continue;
    }
    if (fields.size() < 3) {
      throw Error(ErrorCode::kInvalidManifest,
                  "elist.txt: expected eid, dataset and IRI in: " + line);
    }
    rows.push_back({Trim(fields[0]), Trim(fields[1]), Trim(fields[2])});
  }
  return rows;
}

std::vector<std::string> ReadIdList(const fs::path &path) {
  std::istringstream in(ReadFile(path));
  std::vector<std::string> ids;
  std::string line;
  while (std::getline(in, line)) {
    line = Trim(line);
    if (line.empty()) continue;
    // Split files may carry extra columns; the eid comes first.
    ids.push_back(SplitTabs(line).front());
  }
  return ids;
}

}  // namespace

DatasetManifest LoadEsbm(const fs::path &root, const EsbmOptions &options) {
  std::vector<std::string> dbs;
  if (options.dataset == "all") {
    dbs = {"dbpedia", "lmdb"};
  } else if (options.dataset == "dbpedia" || options.dataset == "lmdb") {
    dbs = {options.dataset};
  } else {
    throw Error(ErrorCode::kUsage, "unknown ESBM dataset " + options.dataset);
  }

  DatasetManifest manifest;
  manifest.name = "esbm-" + options.dataset;
  std::map<std::string, std::string> iri_by_eid;
  for (const auto &row : ReadEntityList(root)) {
    if (std::find(dbs.begin(), dbs.end(), row.db) == dbs.end()) continue;
    fs::path dir = root / (row.db + "_data") / row.eid;
    EntityDescription desc;
    desc.entity.kind = Resource::Kind::kIri;
    desc.entity.raw = row.iri;
    desc.triples =
        ParseTriplesDocument(ReadFile(dir / (row.eid + "_desc.nt")), row.iri);
    for (int k : options.ks) {
      auto &slot = desc.gold[k];
      for (int i = 0; i < options.golds_per_k; ++i) {
        fs::path gold_path = dir / (row.eid + "_gold_top" + std::to_string(k) +
                                    "_" + std::to_string(i) + ".nt");
        GoldSummary g;
        g.annotator = std::to_string(i);
        g.triple_ids = MatchGoldDocument(ReadFile(gold_path), desc.triples,
                                         gold_path.string());
        slot.push_back(std::move(g));
      }
    }
    ValidateGold(desc);
    iri_by_eid[row.eid] = row.iri;
    manifest.entities.push_back(std::move(desc));
  }

  for (int f = 0; f < options.num_folds; ++f) {
    FoldSpec fold;
    fold.index = f;
    for (const auto &db : dbs) {
      fs::path dir = root / (db + "_split") / ("Fold" + std::to_string(f));
      auto append = [&](const char *file, std::vector<std::string> &out) {
        for (const auto &eid : ReadIdList(dir / file)) {
          auto it = iri_by_eid.find(eid);
          if (it == iri_by_eid.end()) {
            throw Error(ErrorCode::kInvalidFold,
                        "fold " + std::to_string(f) + ": unknown eid " + eid);
          }
          out.push_back(it->second);
        }
      };
      append("train.txt", fold.train);
      append("valid.txt", fold.valid);
      append("test.txt", fold.test);
    }
    ValidateFold(fold, manifest);
    manifest.folds.push_back(std::move(fold));
  }
  return manifest;
}

}  // namespace esum
