// Copyright 2026 The ocseg Authors.
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

// Minimum-cost assignment on a rectangular matrix.

#include <span>
#include <vector>

namespace ocseg {

struct Assignment {
  std::vector<int> row_to_col;  // -1 for rows left unassigned
  double total_cost = 0.0;
};

// `cost` is rows x cols, row-major, finite. Assigns min(rows, cols) pairs.
// The matrix is padded square with a constant that exceeds every real entry;
// padded pairs are dropped from the result.
Assignment hungarian(std::span<const double> cost, int rows, int cols);

}  // namespace ocseg
