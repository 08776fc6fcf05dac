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

// Adapter for the ESBM benchmark directory layout:
//
//   <root>/elist.txt                         eid <TAB> dataset <TAB> euri ...
//   <root>/<db>_data/<eid>/<eid>_desc.nt
//   <root>/<db>_data/<eid>/<eid>_gold_top<k>_<i>.nt
//   <root>/<db>_split/Fold<f>/{train,valid,test}.txt    one eid per line
//
// where <db> is "dbpedia" or "lmdb".

#ifndef ESUM_ESBM_HPP_
#define ESUM_ESBM_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "esum/dataset.hpp"

namespace esum {

struct EsbmOptions {
  // "dbpedia", "lmdb" or "all" (fold f of both datasets merged).
  std::string dataset = "dbpedia";
  std::vector<int> ks = {5, 10};
  int golds_per_k = 6;
  int num_folds = 5;
};

DatasetManifest LoadEsbm(const std::filesystem::path &root,
                         const EsbmOptions &options = {});

}  // namespace esum

#endif  // ESUM_ESBM_HPP_
