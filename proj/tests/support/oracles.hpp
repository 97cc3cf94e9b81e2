#pragma once

// Reference computations written independently of the library code paths they
// check. They read diagram data through the public accessors only.

#include "screenopt/influence_diagram.hpp"
#include "screenopt/parameters.hpp"
#include "screenopt/phase2.hpp"

#include <Eigen/Dense>

#include <vector>

namespace screenopt::testing {

/// Information-state index recomputed from the predecessor list.
std::size_t oracleInfoIndex(const InfluenceDiagram& d, NodeId id, const std::vector<int>& path);

/// π(s) by direct product and explicit compatibility test.
double oraclePathProbability(const InfluenceDiagram& d, const std::vector<int>& path, const GlobalStrategy& z);

/// Σ_s π(s) U_v(s) over every path, no pruning; value nodes in declared order.
Eigen::VectorXd oracleExpectedValues(const InfluenceDiagram& d, const GlobalStrategy& z);

/// Every path of the diagram by nested counting, last node fastest.
std::vector<std::vector<int>> oracleAllPaths(const InfluenceDiagram& d);

/// Nondominated objective vectors (minimization, tolerance 1e-9), one per equality class.
std::vector<Eigen::VectorXd> oracleNondominated(const std::vector<Eigen::VectorXd>& points);

/// Two vector sets equal up to tol per component (relative above magnitude 1),
/// with multiplicity ignored.
bool sameVectorSet(const std::vector<Eigen::VectorXd>& a, const std::vector<Eigen::VectorXd>& b,
                   double tol = 1e-9);

/// Prevalence recurrences written out term by term.
Eigen::Vector4d oraclePrevalenceUpdate(const Eigen::Vector4d& psi, const Eigen::Vector3d& found, double tNB,
                                       double tBL, double tLR);

/// Stage-8 row for a positive FIT followed by colonoscopy, straight from the
/// formulas: {NA, Normal, Benign, Large, CRC}.
Eigen::Matrix<double, 5, 1> oracleColonoscopyRow(const screening::ParameterBundle& p, std::size_t fitCutoff,
                                                 const Eigen::Vector4d& psi);

struct PairScan {
  std::size_t female = 0, male = 0;
  double psiR = 0.0;
  double colonoscopies = 0.0;
  bool feasible = false;
};
/// Exhaustive (female, male) scan of the selection program.
PairScan oraclePairScan(const screening::SelectionProblem& p);

/// Exhaustive tree search over every (Z_1, ..., Z_K) strategy sequence of one
/// sex, then the history dominance filter. Returns the surviving comparison
/// vectors (total CRC, period CRC, period large, cumulative colonoscopies).
std::vector<Eigen::VectorXd> oracleHistoryTree(const screening::ParameterBundle& p, screening::Sex sex, int periods,
                                               double budget);

}  // namespace screenopt::testing
