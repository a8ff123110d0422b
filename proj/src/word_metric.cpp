#include "pharm/word_metric.hpp"

#include <unordered_set>

#include "pharm/error.hpp"

namespace pharm {

WordMetric::WordMetric(std::shared_ptr<const CayleyBall> table) : table_(std::move(table)) {}

// For |g| > r the first BFS level around g that meets the table is at depth
// |g| - r, and every vertex met there lies on the sphere of radius r.
std::size_t WordMetric::length(const Element& g) const {
  if (auto idx = table_->index_of(g)) return static_cast<std::size_t>(table_->length(*idx));
  if (auto it = cache_.find(g); it != cache_.end()) return it->second;
  const GroupModel& m = table_->model();
  const int r = table_->radius();
  std::unordered_set<Element, ElementHash> seen{g};
  std::vector<Element> frontier{g};
  for (int depth = 1; depth <= r; ++depth) {
    std::vector<Element> next;
    for (const auto& x : frontier) {
      for (std::size_t s = 0; s < m.degree(); ++s) {
        Element y = m.neighbor(x, s);
        if (table_->index_of(y)) {
          const std::size_t len = static_cast<std::size_t>(r + depth);
          cache_.emplace(g, len);
          return len;
        }
        if (seen.insert(y).second) next.push_back(std::move(y));
      }
    }
    frontier = std::move(next);
  }
  throw ValidationError("word length of " + m.format(g) + " exceeds the metric reach " +
                        std::to_string(reach()));
}

std::size_t WordMetric::distance(const Element& x, const Element& y) const {
  const GroupModel& m = table_->model();
  return length(m.multiply(m.inverse(x), y));
}

}  // namespace pharm
