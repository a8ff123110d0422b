#ifndef PHARM_TESTS_ORACLES_HPP_
#define PHARM_TESTS_ORACLES_HPP_

// Reference computations that share no code path with the library: naive
// word enumeration, the tree-conductance recursion and plain gradient
// descent.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "pharm/dirichlet.hpp"
#include "pharm/group_model.hpp"

namespace oracle {

// Free reduction of a word over letters a, A, b, B, ... with X the inverse
// of x.
inline std::string free_reduce(const std::string& w) {
  std::string out;
  for (char ch : w) {
    const char inv = std::islower(static_cast<unsigned char>(ch))
                         ? static_cast<char>(std::toupper(static_cast<unsigned char>(ch)))
                         : static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    if (!out.empty() && out.back() == inv) {
      out.pop_back();
    } else {
      out.push_back(ch);
    }
  }
  return out;
}

// Cancels adjacent equal letters (every letter an involution).
inline std::string involution_reduce(const std::string& w) {
  std::string out;
  for (char ch : w) {
    if (!out.empty() && out.back() == ch) {
      out.pop_back();
    } else {
      out.push_back(ch);
    }
  }
  return out;
}

// Enumerates all words of length <= n over `letters`; each distinct element
// (as given by `key`) is assigned the shortest word length reaching it.
template <typename Key>
std::vector<std::size_t> sphere_sizes_by_words(const std::string& letters, int n, Key key) {
  std::map<decltype(key(std::string())), int> best;
  std::vector<std::string> layer{""};
  best[key("")] = 0;
  for (int len = 1; len <= n; ++len) {
    std::vector<std::string> next;
    for (const auto& w : layer) {
      for (char ch : letters) next.push_back(w + ch);
    }
    for (const auto& w : next) best.emplace(key(w), len);
    layer = std::move(next);
  }
  std::vector<std::size_t> sizes(n + 1, 0);
  for (const auto& [k, len] : best) ++sizes[len];
  return sizes;
}

// Lamplighter element reached by a word over t, T, a: (cursor, lit lamps).
inline std::pair<int, std::set<int>> lamplighter_walk(const std::string& w) {
  int cursor = 0;
  std::set<int> lamps;
  for (char ch : w) {
    if (ch == 't') ++cursor;
    if (ch == 'T') --cursor;
    if (ch == 'a' && !lamps.erase(cursor)) lamps.insert(cursor);
  }
  return {cursor, lamps};
}

// Capacity of e_G against the sphere of radius R in the 4-regular tree,
// with every edge counted in both directions.
inline double tree_capacity(int R) {
  double below = std::numeric_limits<double>::infinity();  // conductance of a sphere vertex
  for (int j = 1; j < R; ++j) {
    const double branch = std::isinf(below) ? 1.0 : below / (1.0 + below);
    below = 3.0 * branch;
  }
  const double root_branch = std::isinf(below) ? 1.0 : below / (1.0 + below);
  return 2.0 * 4.0 * root_branch;
}

// Minimizes sum_{i} 2 |u_{i+1} - u_i|^p over the path -R..R with u(0) = 1
// and u(+-R) = 0 by gradient descent; returns the minimal energy.
inline double path_capacity_descent(int R, double p) {
  std::vector<double> u(2 * R + 1, 0.0);
  for (int i = 0; i <= 2 * R; ++i) u[i] = 1.0 - std::abs(i - R) / static_cast<double>(R) * 0.5;
  u[R] = 1.0;
  u[0] = u[2 * R] = 0.0;
  auto total = [&] {
    double e = 0.0;
    for (int i = 0; i < 2 * R; ++i) e += 2.0 * std::pow(std::abs(u[i + 1] - u[i]), p);
    return e;
  };
  double step = 0.05;
  double e = total();
  for (int it = 0; it < 400000; ++it) {
    std::vector<double> grad(u.size(), 0.0);
    for (int i = 1; i < 2 * R; ++i) {
      if (i == R) continue;
      auto d = [&](double t) { return t == 0.0 ? 0.0 : (t > 0 ? 1 : -1) * std::pow(std::abs(t), p - 1); };
      grad[i] = 2.0 * p * (d(u[i] - u[i - 1]) - d(u[i + 1] - u[i]));
    }
    std::vector<double> saved = u;
    for (std::size_t i = 0; i < u.size(); ++i) u[i] -= step * grad[i];
    const double e_new = total();
    if (e_new > e) {
      u = saved;
      step *= 0.5;
      if (step < 1e-14) break;
    } else {
      e = e_new;
      step *= 1.1;
    }
  }
  return e;
}

}  // namespace oracle

#endif  // PHARM_TESTS_ORACLES_HPP_
