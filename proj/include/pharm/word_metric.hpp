#ifndef PHARM_WORD_METRIC_HPP_
#define PHARM_WORD_METRIC_HPP_

#include <cstddef>
#include <memory>
#include <unordered_map>

#include "pharm/group_model.hpp"

namespace pharm {

// Exact word metric d(x, y) = |x^-1 y| for elements with |x^-1 y| <= 2r,
// where r is the radius of the backing ball. Lengths up to r are looked up
// directly; longer ones by a breadth-first search from g that stops at the
// first level touching the table. Results beyond the table are memoized, so
// a WordMetric must not be shared across threads.
class WordMetric {
 public:
  explicit WordMetric(std::shared_ptr<const CayleyBall> table);

  const GroupModel& model() const { return table_->model(); }
  int reach() const { return 2 * table_->radius(); }

  // Throws ValidationError if |g| exceeds reach().
  std::size_t length(const Element& g) const;
  std::size_t distance(const Element& x, const Element& y) const;

 private:
  std::shared_ptr<const CayleyBall> table_;
  mutable std::unordered_map<Element, std::size_t, ElementHash> cache_;
};

}  // namespace pharm

#endif  // PHARM_WORD_METRIC_HPP_
