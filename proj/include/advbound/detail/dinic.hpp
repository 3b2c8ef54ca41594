// Copyright 2026 The advbound Authors.
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

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace advbound::detail {

// Dinic's algorithm on a CSR residual graph. Arc i owns half-edges 2i
// (forward) and 2i+1 (reverse). A residual is usable when it exceeds `tol`;
// integer instantiations pass 0.
template <typename Cap>
class Dinic {
 public:
  Dinic(std::uint32_t num_nodes, std::span<const std::uint32_t> from,
        std::span<const std::uint32_t> to, std::span<const Cap> capacity)
      : n_(num_nodes), head_(2 * from.size()), residual_(2 * from.size()),
        start_(num_nodes + 1, 0), adj_(2 * from.size()), level_(num_nodes),
        cursor_(num_nodes) {
    const std::size_t m = from.size();
    for (std::size_t i = 0; i < m; ++i) {
      head_[2 * i] = to[i];
      head_[2 * i + 1] = from[i];
      residual_[2 * i] = capacity[i];
      residual_[2 * i + 1] = Cap{0};
      ++start_[from[i] + 1];
      ++start_[to[i] + 1];
    }
    for (std::uint32_t v = 0; v < n_; ++v) start_[v + 1] += start_[v];
    std::vector<std::size_t> fill(start_.begin(), start_.end() - 1);
    for (std::size_t i = 0; i < m; ++i) {
      adj_[fill[from[i]]++] = static_cast<std::uint32_t>(2 * i);
      adj_[fill[to[i]]++] = static_cast<std::uint32_t>(2 * i + 1);
    }
  }

  Cap solve(std::uint32_t source, std::uint32_t sink, Cap tol) {
    Cap total{0};
    if (source == sink) return total;
    std::vector<std::uint32_t> path;
    while (build_levels(source, sink, tol)) {
      std::copy(start_.begin(), start_.end() - 1, cursor_.begin());
      std::uint32_t u = source;
      path.clear();
      while (true) {
        if (u == sink) {
          Cap push = residual_[path.front()];
          for (auto h : path) push = std::min(push, residual_[h]);
          std::size_t first_saturated = path.size();
          for (std::size_t k = 0; k < path.size(); ++k) {
            residual_[path[k]] -= push;
            residual_[path[k] ^ 1u] += push;
            if (first_saturated == path.size() && !(residual_[path[k]] > tol)) {
              first_saturated = k;
            }
          }
          total += push;
          path.resize(first_saturated);
          u = path.empty() ? source : head_[path.back()];
          continue;
        }
        bool advanced = false;
        for (; cursor_[u] < start_[u + 1]; ++cursor_[u]) {
          const std::uint32_t h = adj_[cursor_[u]];
          const std::uint32_t v = head_[h];
          if (residual_[h] > tol && level_[v] == level_[u] + 1) {
            path.push_back(h);
            u = v;
            advanced = true;
            break;
          }
        }
        if (advanced) continue;
        if (u == source) break;
        level_[u] = -1;  // dead end for this phase
        const std::uint32_t h = path.back();
        path.pop_back();
        u = head_[h ^ 1u];
        ++cursor_[u];
      }
    }
    return total;
  }

  // Flow on arc i: what the reverse half-edge has accumulated.
  Cap flow(std::size_t arc) const { return residual_[2 * arc + 1]; }

  std::vector<bool> reachable_from(std::uint32_t source, Cap tol) const {
    std::vector<bool> seen(n_, false);
    std::vector<std::uint32_t> queue{source};
    seen[source] = true;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      const std::uint32_t u = queue[qi];
      for (std::size_t k = start_[u]; k < start_[u + 1]; ++k) {
        const std::uint32_t h = adj_[k];
        const std::uint32_t v = head_[h];
        if (!seen[v] && residual_[h] > tol) {
          seen[v] = true;
          queue.push_back(v);
        }
      }
    }
    return seen;
  }

 private:
  bool build_levels(std::uint32_t source, std::uint32_t sink, Cap tol) {
    std::fill(level_.begin(), level_.end(), -1);
    std::vector<std::uint32_t> queue{source};
    level_[source] = 0;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      const std::uint32_t u = queue[qi];
      for (std::size_t k = start_[u]; k < start_[u + 1]; ++k) {
        const std::uint32_t h = adj_[k];
        const std::uint32_t v = head_[h];
        if (level_[v] < 0 && residual_[h] > tol) {
          level_[v] = level_[u] + 1;
          queue.push_back(v);
        }
      }
    }
    return level_[sink] >= 0;
  }

  std::uint32_t n_;
  std::vector<std::uint32_t> head_;
  std::vector<Cap> residual_;
  std::vector<std::size_t> start_;
  std::vector<std::uint32_t> adj_;
  std::vector<std::int32_t> level_;
  std::vector<std::size_t> cursor_;
};

}  // namespace advbound::detail
