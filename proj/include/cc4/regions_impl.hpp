#pragma once

#include <queue>

namespace cc4 {

template <typename Predicate>
ComponentLabels label_components(const RegionRaster& raster, Predicate member) {
  const int ns = raster.spec.s_cells;
  const int nt = raster.spec.t_cells;
  ComponentLabels out;
  out.ids.assign(raster.cells.size(), -1);
  std::queue<std::pair<int, int>> frontier;
  for (int j = 0; j < nt; ++j) {
    for (int i = 0; i < ns; ++i) {
      const auto idx = static_cast<std::size_t>(j) * ns + i;
      if (out.ids[idx] >= 0 || !member(raster.cells[idx])) continue;
      const int id = out.count++;
      out.ids[idx] = id;
      frontier.emplace(i, j);
      while (!frontier.empty()) {
        const auto [ci, cj] = frontier.front();
        frontier.pop();
        constexpr int di[4] = {1, -1, 0, 0};
        constexpr int dj[4] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
          const int ni = ci + di[k];
          const int nj = cj + dj[k];
          if (ni < 0 || nj < 0 || ni >= ns || nj >= nt) continue;
          const auto nidx = static_cast<std::size_t>(nj) * ns + ni;
          if (out.ids[nidx] >= 0 || !member(raster.cells[nidx])) continue;
          out.ids[nidx] = id;
          frontier.emplace(ni, nj);
        }
      }
    }
  }
  return out;
}

}  // namespace cc4
