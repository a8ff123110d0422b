#ifndef PHARM_TESTS_LINEAR_ORACLE_HPP_
#define PHARM_TESTS_LINEAR_ORACLE_HPP_

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <vector>

#include "pharm/dirichlet.hpp"

namespace oracle {

// p = 2 Dirichlet problem solved by sparse LU on the free vertices; the
// adjacency comes from GroupModel::neighbors, not from the ball's arcs.
inline std::vector<double> linear_dirichlet(const pharm::DirichletProblem& prob) {
  const pharm::CayleyBall& b = prob.ball();
  const pharm::GroupModel& m = b.model();
  std::vector<int> slot(b.size(), -1);
  int n = 0;
  for (std::size_t v = 0; v < b.size(); ++v) {
    if (!prob.is_clamped(v)) slot[v] = n++;
  }
  std::vector<Eigen::Triplet<double>> triplets;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  for (std::size_t v = 0; v < b.size(); ++v) {
    if (slot[v] < 0) continue;
    const auto nbrs = m.neighbors(b.vertex(v));
    triplets.emplace_back(slot[v], slot[v], static_cast<double>(nbrs.size()));
    for (const auto& g : nbrs) {
      const std::size_t w = *b.index_of(g);
      if (slot[w] >= 0) {
        triplets.emplace_back(slot[v], slot[w], -1.0);
      } else {
        rhs[slot[v]] += *prob.clamped(w);
      }
    }
  }
  Eigen::SparseMatrix<double> A(n, n);
  A.setFromTriplets(triplets.begin(), triplets.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(A);
  const Eigen::VectorXd x = lu.solve(rhs);
  std::vector<double> u(b.size());
  for (std::size_t v = 0; v < b.size(); ++v) u[v] = slot[v] >= 0 ? x[slot[v]] : *prob.clamped(v);
  return u;
}

}  // namespace oracle

#endif  // PHARM_TESTS_LINEAR_ORACLE_HPP_
