#include "qiro/selection.hpp"

#include <algorithm>
#include <cmath>

namespace qiro {

std::vector<RankedEntry> ranked_entries(const Correlations& M, Rng& rng)
{
  std::vector<RankedEntry> out;
  out.reserve(static_cast<std::size_t>(M.size()) + M.offdiag().size());
  for (int i = 0; i < M.size(); ++i) out.push_back({i, i, M.diag(i)});
  for (const auto& e : M.offdiag()) out.push_back({e.i, e.j, e.value});
  // stable: the pre-shuffle order inside a tie group is the storage order,
  // which keeps the shuffle reproducible
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return std::abs(a.value) > std::abs(b.value); });
  std::size_t start = 0;
  while (start < out.size()) {
    const double top = std::abs(out[start].value);
    const double tol = kTieTolerance * std::max(1.0, top);
    std::size_t end = start + 1;
    while (end < out.size() && top - std::abs(out[end].value) <= tol) ++end;
    if (end - start > 1) {
      std::vector<RankedEntry> group(out.begin() + static_cast<std::ptrdiff_t>(start),
                                     out.begin() + static_cast<std::ptrdiff_t>(end));
      shuffle(group, rng);
      std::copy(group.begin(), group.end(), out.begin() + static_cast<std::ptrdiff_t>(start));
    }
    start = end;
  }
  return out;
}

} // namespace qiro
