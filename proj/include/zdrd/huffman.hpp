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

#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace zdrd::huffman {

/// Prefix-code lengths for a histogram. Symbols with zero count get length 0;
/// a single used symbol also gets length 0 since nothing needs to be sent.
/// Equal weights are merged in order of first creation (leaves by index,
/// then internal nodes), so the result depends only on the counts.
std::vector<int> code_lengths(std::span<const std::uint64_t> counts);

/// Empirical entropy -sum p log2 p of the histogram, in bits.
double entropy_bits(std::span<const std::uint64_t> counts);

/// Count-weighted mean of the code lengths, in bits per symbol.
double mean_length(std::span<const std::uint64_t> counts, std::span<const int> lengths);

}  // namespace zdrd::huffman
