#include "pharm/tilf.hpp"

#include <cmath>
#include <sstream>

#include "pharm/error.hpp"

namespace pharm {

namespace {

std::size_t shift_length(const CayleyBall& b, const Element& x) {
  if (auto idx = b.index_of(x)) return static_cast<std::size_t>(b.length(*idx));
  return b.model().word_length(x);
}

}  // namespace

Translation translate(const ScalarField& f, const Element& x) {
  const CayleyBall& b = f.ball();
  const GroupModel& m = b.model();
  const std::size_t shift = shift_length(b, x);
  const int valid = b.radius() - static_cast<int>(shift);
  if (valid < 1) {
    throw ValidationError("translating a radius-" + std::to_string(b.radius()) + " field by " +
                          m.format(x) + " leaves no valid region");
  }
  auto target = valid == b.radius() ? f.ball_ptr() : ball(m, valid);
  const Element x_inv = m.inverse(x);
  std::vector<double> values(target->size());
  for (std::size_t v = 0; v < target->size(); ++v) {
    values[v] = f.at(m.multiply(target->vertex(v), x_inv));
  }
  return Translation{ScalarField(std::move(target), std::move(values)), b.radius(), valid, shift};
}

TranslationEnergy translation_energy(const ScalarField& f, const Element& x, const Exponent& p) {
  const Translation t = translate(f, x);
  TranslationEnergy out;
  out.translated = energy(t.field, p);
  out.bound = static_cast<double>(f.ball().degree()) *
              std::pow(2.0 * static_cast<double>(t.shift) + 1.0, p.value()) * energy(f, p);
  return out;
}

DifferenceApproximation difference_approximation(const ScalarField& f, const Element& x,
                                                 std::size_t n, double p) {
  if (n < 1) throw ValidationError("difference approximation needs n >= 1");
  if (!(p >= 1.0)) throw ValidationError("l^p remainder needs p >= 1");
  const CayleyBall& b = f.ball();
  const GroupModel& m = b.model();

  // owner[v] = k + 1 when v lies in supp(f) x^k.
  std::vector<std::size_t> owner(b.size(), 0);
  std::vector<std::size_t> support;
  for (std::size_t v = 0; v < b.size(); ++v) {
    if (f[v] != 0.0) {
      owner[v] = 1;
      support.push_back(v);
    }
  }
  std::vector<double> avg(b.size(), 0.0);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t v : support) {
    Element g = b.vertex(v);
    for (std::size_t k = 1; k <= n; ++k) {
      g = m.multiply(g, x);
      auto idx = b.index_of(g);
      if (!idx) {
        throw ValidationError("translate by " + m.format(x) + "^" + std::to_string(k) +
                              " leaves the ball at " + m.format(g));
      }
      if (owner[*idx] != 0 && owner[*idx] != k + 1) {
        std::ostringstream os;
        os << "supports of the translates by " << m.format(x) << "^" << owner[*idx] - 1 << " and "
           << m.format(x) << "^" << k << " overlap at " << m.format(g);
        throw ValidationError(os.str());
      }
      owner[*idx] = k + 1;
      avg[*idx] += scale * f[v];
    }
  }
  ScalarField average(f.ball_ptr(), std::move(avg));
  ScalarField difference = f - average;
  const double remainder = lp_norm(average, p);
  return DifferenceApproximation{std::move(difference), std::move(average), remainder};
}

TilfValue tilf_evaluate(const ScalarField& h, const ScalarField& f, const Exponent& p,
                        double tolerance) {
  if (!h.ball().same_as(f.ball())) throw ValidationError("witness and field live on different balls");
  TilfValue out;
  out.witness_residual = max_interior_residual(h, p);
  if (out.witness_residual > tolerance) {
    std::ostringstream os;
    os << "witness residual " << out.witness_residual << " exceeds tolerance " << tolerance;
    throw ValidationError(os.str());
  }
  out.value = pairing(h, f, p);
  return out;
}

InvarianceDefect tilf_invariance_defect(const ScalarField& h, const ScalarField& f,
                                        const Element& x, const Exponent& p, double tolerance) {
  InvarianceDefect out;
  out.original = tilf_evaluate(h, f, p, tolerance).value;
  const Translation t = translate(f, x);
  out.translated = tilf_evaluate(h.restrict_to(t.valid_radius), t.field, p, tolerance).value;
  out.defect = std::abs(out.translated - out.original);
  return out;
}

}  // namespace pharm
