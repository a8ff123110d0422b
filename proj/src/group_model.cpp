#include "pharm/group_model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <sstream>
#include <unordered_set>

#include "pharm/error.hpp"

namespace pharm {

std::string_view family_name(Family f) {
  switch (f) {
    case Family::FreeAbelian:
      return "free_abelian";
    case Family::Free:
      return "free";
    case Family::FreeProductZ2:
      return "free_product_z2";
    case Family::Lamplighter:
      return "lamplighter";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  if (name == "free_abelian") return Family::FreeAbelian;
  if (name == "free") return Family::Free;
  if (name == "free_product_z2") return Family::FreeProductZ2;
  if (name == "lamplighter") return Family::Lamplighter;
  throw ValidationError("unknown group family '" + std::string(name) +
                        "' (expected free_abelian, free, free_product_z2 or lamplighter)");
}

std::size_t ElementHash::operator()(const Element& g) const noexcept {
  // FNV-1a over the code words.
  std::uint64_t h = 1469598103934665603ULL;
  for (std::int32_t c : g.code) {
    auto u = static_cast<std::uint32_t>(c);
    for (int i = 0; i < 4; ++i) {
      h ^= (u >> (8 * i)) & 0xffU;
      h *= 1099511628211ULL;
    }
  }
  h ^= g.code.size();
  return static_cast<std::size_t>(h);
}

namespace detail {

class FamilyOps {
 public:
  virtual ~FamilyOps() = default;
  virtual Element identity() const = 0;
  virtual Element multiply(const Element& x, const Element& y) const = 0;
  virtual Element inverse(const Element& x) const = 0;
  virtual Element canonical(const Element& raw) const = 0;
  // Base generators in documented order, paired with their inverse index.
  virtual std::vector<Generator> base_generators() const = 0;
  virtual std::optional<std::size_t> formula_length(const Element& g) const = 0;
  virtual std::string format(const Element& g) const = 0;
};

namespace {

char letter_name(int i, bool upper) {
  char c = static_cast<char>('a' + i);
  return upper ? static_cast<char>(std::toupper(c)) : c;
}

class FreeAbelianOps final : public FamilyOps {
 public:
  explicit FreeAbelianOps(int d) : d_(d) {}

  Element identity() const override { return Element{std::vector<std::int32_t>(d_, 0)}; }

  Element multiply(const Element& x, const Element& y) const override {
    Element r = x;
    for (int i = 0; i < d_; ++i) r.code[i] += y.code[i];
    return r;
  }

  Element inverse(const Element& x) const override {
    Element r = x;
    for (auto& c : r.code) c = -c;
    return r;
  }

  Element canonical(const Element& raw) const override {
    if (static_cast<int>(raw.code.size()) != d_) {
      throw ValidationError("free_abelian element must have " + std::to_string(d_) +
                            " coordinates");
    }
    return raw;
  }

  std::vector<Generator> base_generators() const override {
    std::vector<Generator> gens;
    for (int i = 0; i < d_; ++i) {
      for (int sign : {+1, -1}) {
        Element e = identity();
        e.code[i] = sign;
        std::size_t idx = gens.size();
        gens.push_back({std::string(1, letter_name(i, sign < 0)), e, sign > 0 ? idx + 1 : idx - 1});
      }
    }
    return gens;
  }

  std::optional<std::size_t> formula_length(const Element& g) const override {
    std::size_t n = 0;
    for (auto c : g.code) n += static_cast<std::size_t>(std::abs(c));
    return n;
  }

  std::string format(const Element& g) const override {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < g.code.size(); ++i) {
      if (i) os << ',';
      os << g.code[i];
    }
    os << ')';
    return os.str();
  }

 private:
  int d_;
};

class FreeOps final : public FamilyOps {
 public:
  explicit FreeOps(int k) : k_(k) {}

  Element identity() const override { return {}; }

  Element multiply(const Element& x, const Element& y) const override {
    Element r = x;
    for (auto c : y.code) {
      if (!r.code.empty() && r.code.back() == -c) {
        r.code.pop_back();
      } else {
        r.code.push_back(c);
      }
    }
    return r;
  }

  Element inverse(const Element& x) const override {
    Element r;
    r.code.assign(x.code.rbegin(), x.code.rend());
    for (auto& c : r.code) c = -c;
    return r;
  }

  Element canonical(const Element& raw) const override {
    for (auto c : raw.code) {
      if (c == 0 || std::abs(c) > k_) {
        throw ValidationError("free group letter " + std::to_string(c) + " out of range");
      }
    }
    return multiply(identity(), raw);
  }

  std::vector<Generator> base_generators() const override {
    std::vector<Generator> gens;
    for (int i = 0; i < k_; ++i) {
      std::size_t idx = gens.size();
      gens.push_back({std::string(1, letter_name(i, false)), Element{{i + 1}}, idx + 1});
      gens.push_back({std::string(1, letter_name(i, true)), Element{{-(i + 1)}}, idx});
    }
    return gens;
  }

  std::optional<std::size_t> formula_length(const Element& g) const override {
    return g.code.size();
  }

  std::string format(const Element& g) const override {
    if (g.code.empty()) return "e";
    std::string s;
    for (auto c : g.code) s += letter_name(std::abs(c) - 1, c < 0);
    return s;
  }

 private:
  int k_;
};

class FreeProductZ2Ops final : public FamilyOps {
 public:
  explicit FreeProductZ2Ops(int m) : m_(m) {}

  Element identity() const override { return {}; }

  Element multiply(const Element& x, const Element& y) const override {
    Element r = x;
    for (auto c : y.code) {
      if (!r.code.empty() && r.code.back() == c) {
        r.code.pop_back();
      } else {
        r.code.push_back(c);
      }
    }
    return r;
  }

  Element inverse(const Element& x) const override {
    Element r;
    r.code.assign(x.code.rbegin(), x.code.rend());
    return r;
  }

  Element canonical(const Element& raw) const override {
    for (auto c : raw.code) {
      if (c < 1 || c > m_) {
        throw ValidationError("free_product_z2 letter " + std::to_string(c) + " out of range");
      }
    }
    return multiply(identity(), raw);
  }

  std::vector<Generator> base_generators() const override {
    std::vector<Generator> gens;
    for (int i = 0; i < m_; ++i) {
      gens.push_back({std::string(1, letter_name(i, false)), Element{{i + 1}},
                      static_cast<std::size_t>(i)});
    }
    return gens;
  }

  std::optional<std::size_t> formula_length(const Element& g) const override {
    return g.code.size();
  }

  std::string format(const Element& g) const override {
    if (g.code.empty()) return "e";
    std::string s;
    for (auto c : g.code) s += letter_name(c - 1, false);
    return s;
  }

 private:
  int m_;
};

// Z_2 wr Z: (lamps L, cursor c) with (L1, c1)(L2, c2) = (L1 xor (L2 + c1), c1 + c2).
class LamplighterOps final : public FamilyOps {
 public:
  Element identity() const override { return Element{{0}}; }

  Element multiply(const Element& x, const Element& y) const override {
    const std::int32_t shift = x.code[0];
    std::vector<std::int32_t> shifted(y.code.begin() + 1, y.code.end());
    for (auto& l : shifted) l += shift;
    Element r;
    r.code.reserve(x.code.size() + shifted.size());
    r.code.push_back(x.code[0] + y.code[0]);
    std::set_symmetric_difference(x.code.begin() + 1, x.code.end(), shifted.begin(),
                                  shifted.end(), std::back_inserter(r.code));
    return r;
  }

  Element inverse(const Element& x) const override {
    Element r;
    r.code.reserve(x.code.size());
    r.code.push_back(-x.code[0]);
    for (std::size_t i = 1; i < x.code.size(); ++i) r.code.push_back(x.code[i] - x.code[0]);
    return r;
  }

  Element canonical(const Element& raw) const override {
    if (raw.code.empty()) throw ValidationError("lamplighter element needs a cursor");
    Element r;
    r.code.push_back(raw.code[0]);
    std::vector<std::int32_t> lamps(raw.code.begin() + 1, raw.code.end());
    std::sort(lamps.begin(), lamps.end());
    // A lamp listed twice is toggled twice.
    for (std::size_t i = 0; i < lamps.size();) {
      std::size_t j = i;
      while (j < lamps.size() && lamps[j] == lamps[i]) ++j;
      if ((j - i) % 2 == 1) r.code.push_back(lamps[i]);
      i = j;
    }
    return r;
  }

  std::vector<Generator> base_generators() const override {
    return {{"t", Element{{1}}, 1}, {"T", Element{{-1}}, 0}, {"a", Element{{0, 0}}, 2}};
  }

  std::optional<std::size_t> formula_length(const Element&) const override {
    return std::nullopt;
  }

  std::string format(const Element& g) const override {
    std::ostringstream os;
    os << '(' << g.code[0] << '|';
    for (std::size_t i = 1; i < g.code.size(); ++i) {
      if (i > 1) os << ',';
      os << g.code[i];
    }
    os << ')';
    return os.str();
  }
};

std::shared_ptr<const FamilyOps> make_ops(const GroupSpec& spec) {
  auto cap = [](bool ok, const std::string& msg) {
    if (!ok) throw ValidationError(msg);
  };
  switch (spec.family) {
    case Family::FreeAbelian:
      cap(spec.rank >= 1 && spec.rank <= 4, "free_abelian rank d must satisfy 1 <= d <= 4");
      return std::make_shared<FreeAbelianOps>(spec.rank);
    case Family::Free:
      cap(spec.rank >= 1 && spec.rank <= 3, "free group rank k must satisfy 1 <= k <= 3");
      return std::make_shared<FreeOps>(spec.rank);
    case Family::FreeProductZ2:
      cap(spec.rank >= 2 && spec.rank <= 4,
          "free_product_z2 factor count m must satisfy 2 <= m <= 4");
      return std::make_shared<FreeProductZ2Ops>(spec.rank);
    case Family::Lamplighter:
      return std::make_shared<LamplighterOps>();
  }
  throw ValidationError("unsupported family");
}

}  // namespace
}  // namespace detail

GroupModel::GroupModel(GroupSpec spec, std::shared_ptr<const detail::FamilyOps> ops)
    : spec_(std::move(spec)), ops_(std::move(ops)), gens_(ops_->base_generators()) {}

GroupModel GroupModel::build(const GroupSpec& spec) {
  if (spec.vertex_budget < 1) throw ValidationError("vertex budget must be positive");
  GroupModel model(spec, detail::make_ops(spec));
  const std::size_t base = model.gens_.size();
  for (const auto& word : spec.extra_generators) {
    if (word.empty()) throw ValidationError("extra generator word must be non-empty");
    std::vector<std::size_t> letters;
    for (char ch : word) {
      std::optional<std::size_t> idx;
      for (std::size_t i = 0; i < base; ++i) {
        if (model.gens_[i].name.size() == 1 && model.gens_[i].name[0] == ch) idx = i;
      }
      if (!idx) {
        throw ValidationError("extra generator '" + word + "' uses unknown letter '" +
                              std::string(1, ch) + "'");
      }
      letters.push_back(*idx);
    }
    Element w = model.identity();
    for (auto i : letters) w = model.multiply(w, model.gens_[i].value);
    if (w == model.identity()) {
      throw ValidationError("extra generator '" + word + "' is trivial");
    }
    for (const auto& g : model.gens_) {
      if (g.value == w) throw ValidationError("extra generator '" + word + "' duplicates " + g.name);
    }
    Element winv = model.inverse(w);
    std::string inv_name;
    for (auto it = letters.rbegin(); it != letters.rend(); ++it) {
      inv_name += model.gens_[model.gens_[*it].inverse].name;
    }
    const std::size_t idx = model.gens_.size();
    if (winv == w) {
      model.gens_.push_back({word, w, idx});
    } else {
      model.gens_.push_back({word, w, idx + 1});
      model.gens_.push_back({inv_name, winv, idx});
    }
  }
  return model;
}

std::string GroupModel::label() const {
  std::string s(family_name(spec_.family));
  if (spec_.family != Family::Lamplighter) s += "(" + std::to_string(spec_.rank) + ")";
  if (!spec_.extra_generators.empty()) {
    s += "+{";
    for (std::size_t i = 0; i < spec_.extra_generators.size(); ++i) {
      if (i) s += ",";
      s += spec_.extra_generators[i];
    }
    s += "}";
  }
  return s;
}

Element GroupModel::identity() const { return ops_->identity(); }

Element GroupModel::multiply(const Element& x, const Element& y) const {
  return ops_->multiply(x, y);
}

Element GroupModel::inverse(const Element& x) const { return ops_->inverse(x); }

Element GroupModel::canonical(const Element& raw) const { return ops_->canonical(raw); }

Element GroupModel::reduce(std::span<const std::size_t> letters) const {
  Element r = identity();
  for (auto s : letters) {
    if (s >= gens_.size()) {
      throw ValidationError("letter index " + std::to_string(s) + " is not in S (|S| = " +
                            std::to_string(gens_.size()) + ")");
    }
    r = multiply(r, gens_[s].value);
  }
  return r;
}

Element GroupModel::reduce(std::string_view word) const {
  std::vector<std::size_t> letters;
  for (char ch : word) {
    auto idx = generator_index(std::string_view(&ch, 1));
    if (!idx) throw ValidationError("letter '" + std::string(1, ch) + "' is not in S");
    letters.push_back(*idx);
  }
  return reduce(letters);
}

Element GroupModel::neighbor(const Element& g, std::size_t s) const {
  return multiply(g, gens_[gens_[s].inverse].value);
}

std::vector<Element> GroupModel::neighbors(const Element& g) const {
  std::vector<Element> out;
  out.reserve(gens_.size());
  for (std::size_t s = 0; s < gens_.size(); ++s) out.push_back(neighbor(g, s));
  return out;
}

std::size_t GroupModel::word_length(const Element& g) const {
  const Element e = identity();
  if (g == e) return 0;
  std::unordered_set<Element, ElementHash> seen{e};
  std::vector<Element> frontier{e};
  for (std::size_t r = 1;; ++r) {
    std::vector<Element> next;
    for (const auto& x : frontier) {
      for (std::size_t s = 0; s < gens_.size(); ++s) {
        Element y = neighbor(x, s);
        if (y == g) return r;
        if (seen.insert(y).second) next.push_back(std::move(y));
      }
    }
    if (seen.size() > spec_.vertex_budget) {
      throw BudgetExceeded("word length search for " + format(g) + " exceeded the vertex budget",
                           seen.size());
    }
    frontier = std::move(next);
  }
}

std::optional<std::size_t> GroupModel::formula_length(const Element& g) const {
  if (!spec_.extra_generators.empty()) return std::nullopt;
  return ops_->formula_length(g);
}

std::string GroupModel::format(const Element& g) const { return ops_->format(g); }

std::optional<std::size_t> GroupModel::generator_index(std::string_view name) const {
  for (std::size_t i = 0; i < gens_.size(); ++i) {
    if (gens_[i].name == name) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> CayleyBall::index_of(const Element& g) const {
  auto it = index_.find(g);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::pair<std::size_t, std::size_t> CayleyBall::sphere(int r) const {
  if (r < 0 || r > radius_) throw ValidationError("sphere radius outside the ball");
  return {sphere_offset_[r], sphere_offset_[r + 1]};
}

std::shared_ptr<const CayleyBall> ball(const GroupModel& model, int n) {
  if (n < 1) throw ValidationError("ball radius must be >= 1");
  const std::size_t budget = model.vertex_budget();
  std::shared_ptr<CayleyBall> b(new CayleyBall(model));
  b->radius_ = n;
  const Element e = model.identity();
  b->vertices_.push_back(e);
  b->lengths_.push_back(0);
  b->index_.emplace(e, 0);
  b->sphere_offset_ = {0, 1};

  for (int r = 0; r < n; ++r) {
    const std::size_t first = b->sphere_offset_[r];
    const std::size_t last = b->sphere_offset_[r + 1];
    for (std::size_t v = first; v < last; ++v) {
      for (std::size_t s = 0; s < model.degree(); ++s) {
        Element w = model.neighbor(b->vertices_[v], s);
        if (b->index_.count(w)) continue;
        b->index_.emplace(w, b->vertices_.size());
        b->vertices_.push_back(std::move(w));
        b->lengths_.push_back(r + 1);
        if (b->vertices_.size() > budget) {
          // Extrapolate the remaining spheres with the last observed growth.
          const double prev = static_cast<double>(last - first);
          const double cur_partial = static_cast<double>(b->vertices_.size() - last);
          const double growth = std::max(1.0, cur_partial / std::max(prev, 1.0));
          double projected = static_cast<double>(b->vertices_.size());
          double layer = std::max(cur_partial, prev * growth);
          projected += layer - cur_partial;
          for (int j = r + 2; j <= n; ++j) {
            layer *= growth;
            projected += layer;
          }
          const auto proj = static_cast<std::size_t>(projected);
          throw BudgetExceeded("ball of radius " + std::to_string(n) + " in " + model.label() +
                                   " needs at least " + std::to_string(proj) +
                                   " vertices (projected), exceeding the vertex budget " +
                                   std::to_string(budget),
                               proj);
        }
      }
    }
    b->sphere_offset_.push_back(b->vertices_.size());
  }

  const std::size_t deg = model.degree();
  b->arcs_.resize(b->vertices_.size() * deg);
  for (std::size_t v = 0; v < b->vertices_.size(); ++v) {
    for (std::size_t s = 0; s < deg; ++s) {
      Arc& arc = b->arcs_[v * deg + s];
      arc.generator = static_cast<std::uint32_t>(s);
      if (b->lengths_[v] < n) {
        // Interior vertices have all neighbours inside.
        arc.target = static_cast<std::uint32_t>(b->index_.at(model.neighbor(b->vertices_[v], s)));
      } else {
        auto it = b->index_.find(model.neighbor(b->vertices_[v], s));
        arc.target = it == b->index_.end() ? Arc::kOutside : static_cast<std::uint32_t>(it->second);
      }
    }
  }
  return b;
}

std::vector<Element> vertex_boundary(const GroupModel& model, std::span<const Element> set) {
  std::unordered_set<Element, ElementHash> members(set.begin(), set.end());
  std::unordered_set<Element, ElementHash> seen;
  std::vector<Element> out;
  for (const auto& a : set) {
    // g s^-1 = a  <=>  g = a s, and a s = a (s^-1)^-1 ranges over a's neighbours.
    for (std::size_t s = 0; s < model.degree(); ++s) {
      Element g = model.neighbor(a, s);
      if (members.count(g) || !seen.insert(g).second) continue;
      out.push_back(std::move(g));
    }
  }
  return out;
}

}  // namespace pharm
