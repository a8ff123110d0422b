#include "pharm/roughiso.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <random>
#include <sstream>
#include <unordered_map>

#include "pharm/error.hpp"
#include "pharm/word_metric.hpp"

namespace pharm {

namespace {

constexpr int kMaxB = 8;
constexpr double kMaxA = 4.0;
constexpr double kGridStep = 0.25;
constexpr int kMaxC = 8;
// Metric tables grow towards the full reach while they stay this small.
constexpr std::size_t kMetricTableCap = 60000;

WordMetric metric_for(const std::shared_ptr<const CayleyBall>& b) {
  std::shared_ptr<const CayleyBall> table = b;
  while (table->radius() < 2 * b->radius()) {
    const double inner = static_cast<double>(table->sphere(table->radius() - 1).second);
    const double growth = static_cast<double>(table->size()) / inner;
    if (static_cast<double>(table->size()) * growth > kMetricTableCap) break;
    table = ball(b->model(), table->radius() + 1);
  }
  return WordMetric(table);
}

int covering_radius(int domain_radius, const RoughConstants& k) {
  return static_cast<int>(std::floor(domain_radius / k.a - k.b - k.c + 1e-12));
}

std::string list_offenders(const std::vector<std::string>& items) {
  std::ostringstream os;
  for (std::size_t i = 0; i < items.size() && i < 8; ++i) os << (i ? ", " : "") << items[i];
  if (items.size() > 8) os << ", ... (" << items.size() << " total)";
  return os.str();
}

// Breadth-first distances from one source inside a ball, up to a depth
// limit, with a touched list so repeated searches cost only what they visit.
class LocalBfs {
 public:
  explicit LocalBfs(const CayleyBall& b) : ball_(b), dist_(b.size(), -1), parent_(b.size()) {}

  void run(std::size_t source, int limit) {
    for (std::size_t v : touched_) dist_[v] = -1;
    touched_.clear();
    dist_[source] = 0;
    touched_.push_back(source);
    for (std::size_t head = 0; head < touched_.size(); ++head) {
      const std::size_t v = touched_[head];
      if (dist_[v] == limit) continue;
      for (const Arc& a : ball_.arcs(v)) {
        if (!a.inside() || dist_[a.target] >= 0) continue;
        dist_[a.target] = dist_[v] + 1;
        parent_[a.target] = v;
        touched_.push_back(a.target);
      }
    }
  }

  // Stops as soon as `target` is reached; returns the path source..target.
  std::vector<std::size_t> path(std::size_t source, std::size_t target) {
    for (std::size_t v : touched_) dist_[v] = -1;
    touched_.clear();
    dist_[source] = 0;
    touched_.push_back(source);
    for (std::size_t head = 0; head < touched_.size() && dist_[target] < 0; ++head) {
      const std::size_t v = touched_[head];
      for (const Arc& a : ball_.arcs(v)) {
        if (!a.inside() || dist_[a.target] >= 0) continue;
        dist_[a.target] = dist_[v] + 1;
        parent_[a.target] = v;
        touched_.push_back(a.target);
      }
    }
    std::vector<std::size_t> out;
    if (dist_[target] < 0) return out;
    for (std::size_t v = target; v != source; v = parent_[v]) out.push_back(v);
    out.push_back(source);
    std::reverse(out.begin(), out.end());
    return out;
  }

  int dist(std::size_t v) const { return dist_[v]; }
  const std::vector<std::size_t>& touched() const { return touched_; }

 private:
  const CayleyBall& ball_;
  std::vector<int> dist_;
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> touched_;
};

std::vector<std::pair<std::size_t, std::size_t>> sample_pairs(std::size_t n, std::size_t budget,
                                                              std::uint64_t seed,
                                                              bool& exhaustive) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  const std::size_t total = n * (n - 1) / 2;
  exhaustive = total <= budget;
  if (exhaustive) {
    pairs.reserve(total);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    }
    return pairs;
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  pairs.reserve(budget);
  while (pairs.size() < budget) {
    const std::size_t i = pick(rng);
    const std::size_t j = pick(rng);
    if (i != j) pairs.emplace_back(i, j);
  }
  return pairs;
}

}  // namespace

CoarseMap::CoarseMap(std::shared_ptr<const CayleyBall> domain,
                     std::shared_ptr<const CayleyBall> codomain, std::vector<std::size_t> image,
                     RoughConstants constants)
    : domain_(std::move(domain)),
      codomain_(std::move(codomain)),
      image_(std::move(image)),
      constants_(constants) {
  if (!domain_ || !codomain_) throw ValidationError("coarse map needs both balls");
  if (image_.size() != domain_->size()) throw ValidationError("coarse map image has the wrong size");
  for (std::size_t y : image_) {
    if (y >= codomain_->size()) throw ValidationError("coarse map image index out of range");
  }
}

const Element& CoarseMap::operator()(const Element& x) const {
  auto idx = domain_->index_of(x);
  if (!idx) throw ValidationError(domain_->model().format(x) + " is outside the map's domain");
  return image(*idx);
}

FitResult fit_rough_constants(const VertexMap& map, std::shared_ptr<const CayleyBall> domain,
                              std::shared_ptr<const CayleyBall> codomain,
                              const FitOptions& options) {
  std::vector<std::size_t> image(domain->size());
  std::vector<std::string> offenders;
  for (std::size_t v = 0; v < domain->size(); ++v) {
    const Element y = codomain->model().canonical(map(domain->vertex(v)));
    auto idx = codomain->index_of(y);
    if (!idx) {
      offenders.push_back(domain->model().format(domain->vertex(v)) + " -> " +
                          codomain->model().format(y));
      continue;
    }
    image[v] = *idx;
  }
  if (!offenders.empty()) {
    throw ValidationError("map image escapes the codomain ball: " + list_offenders(offenders));
  }

  FitResult result;
  WordMetric dx = metric_for(domain);
  WordMetric dy = metric_for(codomain);
  auto pairs = sample_pairs(domain->size(), options.sample_budget, options.seed, result.exhaustive);
  result.pairs_checked = pairs.size();

  // need[b] = smallest real a making every pair satisfy both inequalities.
  std::vector<double> need(kMaxB + 1, 1.0);
  for (auto [i, j] : pairs) {
    const double d_dom = static_cast<double>(dx.distance(domain->vertex(i), domain->vertex(j)));
    const double d_cod =
        static_cast<double>(dy.distance(codomain->vertex(image[i]), codomain->vertex(image[j])));
    for (int b = 0; b <= kMaxB; ++b) {
      const double upper = (d_cod - b) / d_dom;
      const double lower =
          d_cod + b > 0 ? d_dom / (d_cod + b) : std::numeric_limits<double>::infinity();
      need[b] = std::max({need[b], upper, lower});
    }
  }
  std::optional<RoughConstants> fitted;
  for (int b = 0; b <= kMaxB && !fitted; ++b) {
    const double a = std::max(1.0, std::ceil(need[b] / kGridStep - 1e-9) * kGridStep);
    if (a <= kMaxA) fitted = RoughConstants{a, static_cast<double>(b), 1.0};
  }
  if (!fitted) {
    result.diagnostics = "no (a, b) on the grid satisfies the distance inequalities";
    return result;
  }

  // Distance of every codomain vertex to the image, within the codomain ball.
  std::vector<int> to_image(codomain->size(), -1);
  std::deque<std::size_t> queue;
  for (std::size_t y : image) {
    if (to_image[y] < 0) {
      to_image[y] = 0;
      queue.push_back(y);
    }
  }
  while (!queue.empty()) {
    const std::size_t v = queue.front();
    queue.pop_front();
    for (const Arc& a : codomain->arcs(v)) {
      if (!a.inside() || to_image[a.target] >= 0) continue;
      to_image[a.target] = to_image[v] + 1;
      queue.push_back(a.target);
    }
  }
  const Element& base = codomain->vertex(image[0]);
  std::vector<int> from_base(codomain->size());
  for (std::size_t y = 0; y < codomain->size(); ++y) {
    from_base[y] = static_cast<int>(dy.distance(base, codomain->vertex(y)));
  }
  for (int c = 1; c <= kMaxC; ++c) {
    RoughConstants k = *fitted;
    k.c = c;
    const int rho = covering_radius(domain->radius(), k);
    if (rho < 0) break;
    bool covered = true;
    for (std::size_t y = 0; y < codomain->size() && covered; ++y) {
      if (from_base[y] <= rho && (to_image[y] < 0 || to_image[y] > c)) covered = false;
    }
    if (covered) {
      result.covered_radius = rho;
      result.map.emplace(domain, codomain, std::move(image), k);
      std::ostringstream os;
      os << "covering certified within distance " << rho << " of phi(e)";
      result.diagnostics = os.str();
      return result;
    }
  }
  result.diagnostics = "no covering constant c <= " + std::to_string(kMaxC) +
                       " fits inside the certified region";
  return result;
}

ConstantCheck check_constants(const CoarseMap& map, std::size_t samples, std::uint64_t seed) {
  WordMetric dx = metric_for(map.domain_ptr());
  WordMetric dy = metric_for(map.codomain_ptr());
  const RoughConstants& k = map.constants();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, map.domain().size() - 1);
  ConstantCheck check;
  check.worst_excess = -std::numeric_limits<double>::infinity();
  while (check.pairs < samples) {
    const std::size_t i = pick(rng);
    const std::size_t j = pick(rng);
    if (i == j) continue;
    ++check.pairs;
    const double d_dom =
        static_cast<double>(dx.distance(map.domain().vertex(i), map.domain().vertex(j)));
    const double d_cod = static_cast<double>(dy.distance(map.image(i), map.image(j)));
    const double excess = std::max(d_dom / k.a - k.b - d_cod, d_cod - k.a * d_dom - k.b);
    check.worst_excess = std::max(check.worst_excess, excess);
    if (excess > 1e-12) ++check.violations;
  }
  return check;
}

int covered_ball_radius(const CoarseMap& map) {
  const int rho = covering_radius(map.domain().radius(), map.constants());
  return std::min(rho - map.codomain().length(map.image_index(0)), map.codomain().radius());
}

RoughInverse rough_inverse(const CoarseMap& map) {
  const int r = covered_ball_radius(map);
  if (r < 1) {
    throw ValidationError("covered codomain region is too small for a rough inverse (radius " +
                          std::to_string(r) + ")");
  }
  const CayleyBall& cod = map.codomain();
  const int c = static_cast<int>(map.constants().c);
  auto psi_domain = r == cod.radius() ? map.codomain_ptr() : ball(cod.model(), r);

  // Smallest domain index mapped onto each codomain vertex.
  std::vector<std::size_t> first_pre(cod.size(), std::numeric_limits<std::size_t>::max());
  for (std::size_t x = map.domain().size(); x-- > 0;) first_pre[map.image_index(x)] = x;

  std::vector<std::size_t> psi(psi_domain->size());
  LocalBfs bfs(cod);
  for (std::size_t y = 0; y < psi_domain->size(); ++y) {
    bfs.run(y, c);
    int best_level = c + 1;
    std::size_t best = std::numeric_limits<std::size_t>::max();
    for (std::size_t v : bfs.touched()) {
      if (first_pre[v] == std::numeric_limits<std::size_t>::max()) continue;
      const int level = bfs.dist(v);
      if (level < best_level || (level == best_level && first_pre[v] < best)) {
        best_level = level;
        best = first_pre[v];
      }
    }
    if (best_level > c) {
      throw ValidationError("no image point within c of " + cod.model().format(cod.vertex(y)));
    }
    psi[y] = best;
  }

  RoughInverse inv{CoarseMap(psi_domain, map.domain_ptr(), std::move(psi), map.constants())};
  const RoughConstants& k = map.constants();
  inv.back_bound = k.a * (k.c + k.b);
  inv.forth_bound = k.c;
  WordMetric dx = metric_for(map.domain_ptr());
  WordMetric dy = metric_for(map.codomain_ptr());
  for (std::size_t x = 0; x < map.domain().size(); ++x) {
    const std::size_t y = map.image_index(x);
    if (y >= psi_domain->size()) continue;
    const double d = static_cast<double>(
        dx.distance(map.domain().vertex(inv.map.image_index(y)), map.domain().vertex(x)));
    inv.max_back_displacement = std::max(inv.max_back_displacement, d);
  }
  for (std::size_t y = 0; y < psi_domain->size(); ++y) {
    const double d =
        static_cast<double>(dy.distance(map.image(inv.map.image_index(y)), cod.vertex(y)));
    inv.max_forth_displacement = std::max(inv.max_forth_displacement, d);
  }
  inv.bounds_hold =
      inv.max_back_displacement <= inv.back_bound && inv.max_forth_displacement <= inv.forth_bound;
  return inv;
}

PullbackResult pullback(const ScalarField& f, const CoarseMap& map, const Exponent& p) {
  const CayleyBall& fb = f.ball();
  if (!(fb.model() == map.codomain().model())) {
    throw ValidationError("field and map codomain use different group models");
  }
  const CayleyBall& dom = map.domain();
  std::vector<std::size_t> img(dom.size());
  std::vector<std::string> offenders;
  for (std::size_t v = 0; v < dom.size(); ++v) {
    auto idx = fb.index_of(map.image(v));
    if (!idx) {
      offenders.push_back(fb.model().format(map.image(v)));
      continue;
    }
    img[v] = *idx;
  }
  if (!offenders.empty()) {
    throw ValidationError("map image escapes the field's ball: " + list_offenders(offenders));
  }

  std::vector<double> values(dom.size());
  for (std::size_t v = 0; v < dom.size(); ++v) values[v] = f[img[v]];
  PullbackResult result{ScalarField(map.domain_ptr(), std::move(values))};

  const RoughConstants& k = map.constants();
  const int walk = static_cast<int>(std::floor(k.a + k.b + 1e-12));
  std::unordered_map<std::uint64_t, std::uint32_t> multiplicity;
  LocalBfs from_p(fb), from_q(fb);
  std::vector<std::uint64_t> edges;
  for (std::size_t v = 0; v < dom.size(); ++v) {
    for (const Arc& arc : dom.arcs(v)) {
      if (!arc.inside()) continue;
      const std::size_t P = img[v];
      const std::size_t Q = img[arc.target];
      if (P == Q) continue;
      from_p.run(P, walk);
      from_q.run(Q, walk);
      if (from_p.dist(Q) < 0) {
        throw ValidationError("images of adjacent vertices are more than " + std::to_string(walk) +
                              " apart inside the field's ball");
      }
      edges.clear();
      for (std::size_t h : from_p.touched()) {
        const int dh = from_p.dist(h);
        if (dh >= walk) continue;
        for (const Arc& e : fb.arcs(h)) {
          if (!e.inside()) continue;
          const int dq = from_q.dist(e.target);
          if (dq < 0 || dh + 1 + dq > walk) continue;
          const std::uint64_t lo = std::min<std::uint64_t>(h, e.target);
          const std::uint64_t hi = std::max<std::uint64_t>(h, e.target);
          edges.push_back(lo << 32 | hi);
        }
      }
      std::sort(edges.begin(), edges.end());
      edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
      for (auto e : edges) ++multiplicity[e];
    }
  }
  std::uint32_t max_m = 0;
  for (const auto& [e, m] : multiplicity) max_m = std::max(max_m, m);
  // Each domain edge is met once per direction.
  result.k = std::ceil(max_m / 2.0);
  result.pulled_energy = energy(result.field, p);
  result.bound = std::pow(k.a + k.b, p.value() - 1.0) * result.k * energy(f, p);
  result.bound_holds = result.pulled_energy <= result.bound * (1.0 + 1e-12);
  return result;
}

std::vector<CoarseIdentityRow> check_coarse_identity(const ScalarField& f, const CoarseMap& map,
                                                     const CoarseMap& inverse,
                                                     const Exponent& p) {
  const CayleyBall& fb = f.ball();
  const CayleyBall& dom = map.domain();
  if (!(fb.model() == dom.model()) || !(inverse.codomain().model() == dom.model())) {
    throw ValidationError("field, map and inverse disagree on the domain group");
  }
  std::vector<CoarseIdentityRow> rows;
  LocalBfs bfs(fb);
  for (std::size_t x = 0; x < dom.size(); ++x) {
    const std::size_t y = map.image_index(x);
    if (y >= inverse.domain().size()) continue;
    auto fx = fb.index_of(dom.vertex(x));
    auto fz = fb.index_of(inverse.image(y));
    if (!fx || !fz) continue;
    const int radius = dom.length(x);
    while (static_cast<int>(rows.size()) <= radius) {
      rows.push_back({static_cast<int>(rows.size()), 0.0, 0.0, true});
    }
    if (*fx == *fz) continue;
    CoarseIdentityRow& row = rows[radius];
    const double change = std::abs(f[*fz] - f[*fx]);
    const auto path = bfs.path(*fx, *fz);
    double sum = 0.0;
    for (std::size_t i = 1; i < path.size(); ++i) {
      sum += std::pow(std::abs(f[path[i]] - f[path[i - 1]]), p.value());
    }
    const double bound = std::pow(static_cast<double>(path.size()), p.value() - 1.0) * sum;
    row.max_change = std::max(row.max_change, change);
    row.max_path_bound = std::max(row.max_path_bound, std::pow(bound, 1.0 / p.value()));
    if (std::pow(change, p.value()) > bound * (1.0 + 1e-9) + 1e-300) row.bound_holds = false;
  }
  return rows;
}

int transport_radius(const ScalarField& h, const CoarseMap& inverse) {
  const CayleyBall& b = inverse.domain();
  for (std::size_t y = 0; y < b.size(); ++y) {
    if (!h.ball().index_of(inverse.image(y))) return b.length(y) - 1;
  }
  return b.radius();
}

TransportResult transport_harmonic(const ScalarField& h, const CoarseMap& map,
                                   const CoarseMap& inverse, const Exponent& p,
                                   const std::vector<int>& radii, const SolverConfig& config) {
  if (!(h.ball().model() == map.domain().model()) ||
      !(inverse.codomain().model() == map.domain().model()) ||
      !(inverse.domain().model() == map.codomain().model())) {
    throw ValidationError("field, map and inverse disagree on the groups");
  }
  const int r = transport_radius(h, inverse);
  if (r < 1) throw ValidationError("the inverse leaves the field's ball immediately");
  auto target = r == inverse.domain().radius() ? inverse.domain_ptr()
                                               : ball(inverse.domain().model(), r);
  std::vector<double> values(target->size());
  for (std::size_t y = 0; y < target->size(); ++y) values[y] = h.at(inverse.image(y));
  ScalarField composed(target, std::move(values));
  auto decomposition = royden_decompose(composed, p, radii, config);
  return TransportResult{std::move(composed), std::move(decomposition)};
}

}  // namespace pharm
