// Copyright 2026 The zdrd Authors
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

#include "zdrd/huffman.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <queue>
#include <tuple>

#include "zdrd/errors.hpp"

namespace zdrd::huffman {

std::vector<int> code_lengths(std::span<const std::uint64_t> counts) {
  std::vector<int> lengths(counts.size(), 0);

  // (weight, creation order, node id); the order makes ties deterministic.
  using Entry = std::tuple<std::uint64_t, std::size_t, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  std::vector<std::size_t> parent;
  std::vector<std::size_t> leaf_node(counts.size(), SIZE_MAX);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] == 0) continue;
    leaf_node[i] = parent.size();
    heap.emplace(counts[i], parent.size(), parent.size());
    parent.push_back(SIZE_MAX);
  }
  if (heap.size() < 2) return lengths;

  while (heap.size() > 1) {
    const auto [w1, o1, n1] = heap.top();
    heap.pop();
    const auto [w2, o2, n2] = heap.top();
    heap.pop();
    const std::size_t id = parent.size();
    parent.push_back(SIZE_MAX);
    parent[n1] = id;
    parent[n2] = id;
    heap.emplace(w1 + w2, id, id);
  }

  // Depth of each node; parents are always created after their children.
  std::vector<int> depth(parent.size(), 0);
  for (std::size_t id = parent.size(); id-- > 0;) {
    if (parent[id] != SIZE_MAX) depth[id] = depth[parent[id]] + 1;
  }
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (leaf_node[i] != SIZE_MAX) lengths[i] = depth[leaf_node[i]];
  }
  return lengths;
}

double entropy_bits(std::span<const std::uint64_t> counts) {
  double total = 0.0;
  for (const auto c : counts) total += static_cast<double>(c);
  if (total == 0.0) return 0.0;
  double h = 0.0;
  for (const auto c : counts) {
    if (c == 0) continue;
    const double pr = static_cast<double>(c) / total;
    h -= pr * std::log2(pr);
  }
  return h;
}

double mean_length(std::span<const std::uint64_t> counts, std::span<const int> lengths) {
  if (counts.size() != lengths.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "counts and lengths differ in size");
  }
  double total = 0.0;
  double bits = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    total += static_cast<double>(counts[i]);
    bits += static_cast<double>(counts[i]) * lengths[i];
  }
  return total == 0.0 ? 0.0 : bits / total;
}

}  // namespace zdrd::huffman
