#ifndef PHARM_GROUP_MODEL_HPP_
#define PHARM_GROUP_MODEL_HPP_

// Finitely generated groups with a symmetric generating set S, canonical
// element forms, the word metric, and breadth-first enumeration of balls.
//
// Generator order (fixed, used everywhere enumeration order matters):
//   free_abelian(d)    a, A, b, B, ...   (+e_1, -e_1, +e_2, -e_2, ...)
//   free(k)            a, A, b, B, ...   (a_1, a_1^-1, a_2, a_2^-1, ...)
//   free_product_z2(m) a, b, c, d        (involutions)
//   lamplighter        t, T, a           (cursor +1, cursor -1, toggle)
// Extra generators, given as words over these letters, follow the base
// letters in the order listed, each immediately followed by its inverse
// unless the word is an involution.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace pharm {

enum class Family { FreeAbelian, Free, FreeProductZ2, Lamplighter };

std::string_view family_name(Family f);
Family parse_family(std::string_view name);

inline constexpr std::size_t kDefaultVertexBudget = 200000;

struct GroupSpec {
  Family family = Family::FreeAbelian;
  // d for free_abelian, k for free, m for free_product_z2; unused for the
  // lamplighter.
  int rank = 1;
  std::vector<std::string> extra_generators;
  std::size_t vertex_budget = kDefaultVertexBudget;

  bool operator==(const GroupSpec&) const = default;
};

// Canonical form of a group element. The meaning of `code` depends on the
// family:
//   free_abelian      the coordinate vector
//   free              reduced word, letter i encoded as +(i+1), inverse -(i+1)
//   free_product_z2   word without repeated adjacent letters, letters 1..m
//   lamplighter       code[0] = cursor, code[1..] = sorted lit positions
struct Element {
  std::vector<std::int32_t> code;

  bool operator==(const Element&) const = default;
  auto operator<=>(const Element&) const = default;
};

struct ElementHash {
  std::size_t operator()(const Element& g) const noexcept;
};

struct Generator {
  std::string name;
  Element value;
  std::size_t inverse;  // index of s^-1 in S
};

namespace detail {
class FamilyOps;
}

class GroupModel {
 public:
  // Validates the caps (d <= 4, k <= 3, 2 <= m <= 4) and assembles S.
  static GroupModel build(const GroupSpec& spec);

  const GroupSpec& spec() const noexcept { return spec_; }
  std::span<const Generator> generators() const noexcept { return gens_; }
  std::size_t degree() const noexcept { return gens_.size(); }
  std::size_t vertex_budget() const noexcept { return spec_.vertex_budget; }
  std::string label() const;

  Element identity() const;
  Element multiply(const Element& x, const Element& y) const;
  Element inverse(const Element& x) const;

  // Product s_1 s_2 ... s_n of generators given by index into S.
  Element reduce(std::span<const std::size_t> letters) const;
  // Same, with letters given by single-character generator names.
  Element reduce(std::string_view word) const;
  // Reduces an arbitrary code vector to canonical form (idempotent).
  Element canonical(const Element& raw) const;

  // g s^-1 for the s at position `s` of S.
  Element neighbor(const Element& g, std::size_t s) const;
  // g s^-1 for every s in S, in generator order.
  std::vector<Element> neighbors(const Element& g) const;

  // |g| by breadth-first search from e_G (bounded by the vertex budget).
  std::size_t word_length(const Element& g) const;
  // Closed-form length where one is known (free abelian: l1 norm, free
  // groups: reduced length), only without extra generators.
  std::optional<std::size_t> formula_length(const Element& g) const;

  std::string format(const Element& g) const;
  std::optional<std::size_t> generator_index(std::string_view name) const;

  bool operator==(const GroupModel& other) const { return spec_ == other.spec_; }

 private:
  GroupModel(GroupSpec spec, std::shared_ptr<const detail::FamilyOps> ops);

  GroupSpec spec_;
  std::shared_ptr<const detail::FamilyOps> ops_;
  std::vector<Generator> gens_;
};

// One generator-labelled arc leaving a vertex of a ball.
struct Arc {
  static constexpr std::uint32_t kOutside = std::numeric_limits<std::uint32_t>::max();
  std::uint32_t target;  // index of g s^-1, or kOutside
  std::uint32_t generator;

  bool inside() const noexcept { return target != kOutside; }
};

// The truncation {|g| <= n} split into the interior O_n = {|g| < n} and the
// vertex boundary {|g| = n}. Vertices are stored in BFS order, so the
// interior is the prefix [0, interior_size()) and the vertices of a smaller
// ball form a prefix of a larger one.
class CayleyBall {
 public:
  const GroupModel& model() const noexcept { return model_; }
  int radius() const noexcept { return radius_; }
  std::size_t size() const noexcept { return vertices_.size(); }
  std::size_t interior_size() const noexcept { return sphere_offset_[radius_]; }
  std::size_t boundary_size() const noexcept { return size() - interior_size(); }
  std::size_t degree() const noexcept { return model_.degree(); }

  const Element& vertex(std::size_t v) const { return vertices_[v]; }
  std::span<const Element> vertices() const noexcept { return vertices_; }
  int length(std::size_t v) const { return lengths_[v]; }
  bool is_interior(std::size_t v) const noexcept { return v < interior_size(); }

  // Arcs g -> g s^-1 for every s in S; entries leaving the ball are kOutside.
  std::span<const Arc> arcs(std::size_t v) const {
    return {arcs_.data() + v * degree(), degree()};
  }

  std::optional<std::size_t> index_of(const Element& g) const;
  // Index range [first, last) of the sphere of radius r <= radius().
  std::pair<std::size_t, std::size_t> sphere(int r) const;

  bool same_as(const CayleyBall& other) const {
    return this == &other || (radius_ == other.radius_ && model_ == other.model_);
  }

 private:
  friend std::shared_ptr<const CayleyBall> ball(const GroupModel&, int);
  explicit CayleyBall(GroupModel model) : model_(std::move(model)) {}

  GroupModel model_;
  int radius_ = 0;
  std::vector<Element> vertices_;
  std::vector<int> lengths_;
  std::vector<std::size_t> sphere_offset_;  // size radius_ + 2
  std::vector<Arc> arcs_;
  std::unordered_map<Element, std::size_t, ElementHash> index_;
};

// Ball of radius n >= 1 around e_G. Throws BudgetExceeded with the projected
// vertex count when the model's budget would be exceeded.
std::shared_ptr<const CayleyBall> ball(const GroupModel& model, int n);

// {g not in A : g s^-1 in A for some s in S}, in discovery order.
std::vector<Element> vertex_boundary(const GroupModel& model, std::span<const Element> set);

}  // namespace pharm

#endif  // PHARM_GROUP_MODEL_HPP_
