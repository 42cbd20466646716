// Copyright 2026 The tplot Authors
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

#include <limits>
#include <vector>

#include "tplot/matrix.hpp"

namespace tplot {

struct AssignmentResult {
  double value = 0.0;
  Permutation assignment;  // assignment[row] = column
};

// Maximum-weight perfect assignment on a square weight matrix.
// Shortest augmenting path (Hungarian / Kuhn-Munkres with potentials), O(n^3).
inline AssignmentResult max_weight_assignment(const SquareMatrix& weights) {
  const int n = weights.size();
  const double inf = std::numeric_limits<double>::infinity();
  // Minimise cost = -weight. Arrays are 1-based, index 0 is the virtual root.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> match_of_col(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    match_of_col[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, false);
    do {
      used[j0] = true;
      const int i0 = match_of_col[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = -weights(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match_of_col[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match_of_col[j0] != 0);
    do {
      const int j1 = way[j0];
      match_of_col[j0] = match_of_col[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  AssignmentResult out;
  out.assignment.assign(n, -1);
  for (int j = 1; j <= n; ++j) {
    if (match_of_col[j] != 0) out.assignment[match_of_col[j] - 1] = j - 1;
  }
  // Value summed from the witness.
  for (int i = 0; i < n; ++i) out.value += weights(i, out.assignment[i]);
  return out;
}

}  // namespace tplot
