#pragma once

// Oracles shared by the unit tests and the acceptance run.

#include <map>

#include "nangle/algcore.hpp"

namespace nangle::oracle {

// Independent oracle: dimension of kQ/I for a homogeneous ideal by brute-force spanning of
// all two-sided multiples u r w inside each graded piece, up to a fixed length.
inline std::size_t naive_dimension(const AlgebraPresentation& p, std::size_t max_len, bool* bound_ok = nullptr) {
  const auto& q = p.quiver;
  std::vector<std::vector<std::vector<std::size_t>>> paths(max_len + 1);
  for (std::size_t v = 0; v < q.vertices.size(); ++v) paths[0].push_back({});
  for (std::size_t a = 0; a < q.arrows.size(); ++a) paths[1].push_back({a});
  for (std::size_t l = 2; l <= max_len; ++l)
    for (const auto& pth : paths[l - 1])
      for (std::size_t a = 0; a < q.arrows.size(); ++a)
        if (q.arrows[pth.back()].target == q.arrows[a].source) {
          auto np = pth;
          np.push_back(a);
          paths[l].push_back(np);
        }
  auto rels = p.relations;
  std::size_t total = q.vertices.size();
  for (std::size_t l = 1; l <= max_len; ++l) {
    std::map<std::vector<std::size_t>, std::size_t> idx;
    for (std::size_t i = 0; i < paths[l].size(); ++i) idx[paths[l][i]] = i;
    std::vector<std::vector<Residue>> rows;
    for (const auto& r : rels) {
      std::size_t rl = r[0].arrows.size();
      if (rl > l) continue;
      auto [rs, rt] = q.endpoints(r[0].arrows, r[0].base);
      for (std::size_t ul = 0; ul + rl <= l; ++ul) {
        std::size_t wl = l - rl - ul;
        for (const auto& u : paths[ul]) {
          if (ul && q.arrows[u.back()].target != rs) continue;
          for (const auto& w : paths[wl]) {
            if (wl && q.arrows[w.front()].source != rt) continue;
            std::vector<Residue> row(paths[l].size(), 0);
            for (const auto& t : r) {
              std::vector<std::size_t> full = ul ? u : std::vector<std::size_t>{};
              full.insert(full.end(), t.arrows.begin(), t.arrows.end());
              if (wl) full.insert(full.end(), w.begin(), w.end());
              auto& slot = row[idx.at(full)];
              slot = p.field.add(slot, t.coeff);
            }
            rows.push_back(row);
          }
        }
      }
    }
    Matrix m(p.field.p(), rows.size(), paths[l].size());
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < rows[i].size(); ++j) m.at(i, j) = rows[i][j];
    std::size_t piece = paths[l].size() - rank(m);
    if (l == max_len && bound_ok) *bound_ok = piece == 0;
    total += piece;
  }
  return total;
}

}  // namespace nangle::oracle
