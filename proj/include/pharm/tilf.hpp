#ifndef PHARM_TILF_HPP_
#define PHARM_TILF_HPP_

// Right translation f_x(g) = f(g x^-1), averages of translates, and the
// functional T(f) = <Delta_p h, f> built from a p-harmonic h.

#include <cstddef>

#include "pharm/energy.hpp"
#include "pharm/group_model.hpp"

namespace pharm {

struct Translation {
  ScalarField field;  // f_x on the ball of radius source_radius - |x|
  int source_radius = 0;
  int valid_radius = 0;
  std::size_t shift = 0;  // |x|
};

// Throws ValidationError when |x| >= radius of f's ball.
Translation translate(const ScalarField& f, const Element& x);

struct TranslationEnergy {
  double translated = 0.0;  // energy of f_x on its valid ball
  double bound = 0.0;       // #S (2|x| + 1)^p energy(f)
};

TranslationEnergy translation_energy(const ScalarField& f, const Element& x, const Exponent& p);

struct DifferenceApproximation {
  ScalarField difference;  // f - A_n f
  ScalarField average;     // A_n f = (1/n) sum_{k=1..n} f_{x^k}
  double remainder = 0.0;  // ||A_n f||_p
};

// f must be finitely supported inside its ball with supp(f) x^k inside the
// ball and pairwise disjoint for k = 0..n; otherwise ValidationError names
// the offending powers.
DifferenceApproximation difference_approximation(const ScalarField& f, const Element& x,
                                                 std::size_t n, double p);

struct TilfValue {
  double value = 0.0;
  double witness_residual = 0.0;  // max interior |Delta_p h|
};

// pairing(h, f, p); rejects h whose interior residual exceeds `tolerance`
// and fields on different balls.
TilfValue tilf_evaluate(const ScalarField& h, const ScalarField& f, const Exponent& p,
                        double tolerance = 1e-8);

struct InvarianceDefect {
  double original = 0.0;    // T(f) on h's ball
  double translated = 0.0;  // T(f_x) on the valid ball, with h restricted
  double defect = 0.0;      // |translated - original|
};

InvarianceDefect tilf_invariance_defect(const ScalarField& h, const ScalarField& f,
                                        const Element& x, const Exponent& p,
                                        double tolerance = 1e-8);

}  // namespace pharm

#endif  // PHARM_TILF_HPP_
