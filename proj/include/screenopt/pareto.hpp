#pragma once

// Nondominated frontiers of finite multi-objective problems. Objective tables
// are dense matrices with one row per strategy and every column in
// minimization form.

#include "screenopt/influence_diagram.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace screenopt {

inline constexpr double kDominanceTolerance = 1e-9;

/// a ≤ b + tol everywhere and a < b − tol somewhere (minimization).
bool dominates(const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::Ref<const Eigen::VectorXd>& b,
               double tol = kDominanceTolerance);
/// |a − b| ≤ tol componentwise.
bool sameObjectives(const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::Ref<const Eigen::VectorXd>& b,
                    double tol = kDominanceTolerance);

struct ScalarizationParams {
  Eigen::VectorXd weights;
  double epsilon = 0.0;
  Eigen::VectorXd utopia;
  Eigen::VectorXd nadir;
};

struct UtopiaNadir {
  Eigen::VectorXd utopia;  // column minima over every row
  Eigen::VectorXd nadir;   // column maxima over the nondominated rows
};

/// Exact bounds by enumeration. Requires at least one row.
UtopiaNadir computeUtopiaNadir(const Eigen::MatrixXd& objectives);

/// max_i w_i|o_i − u_i| + ε Σ_i w_i|o_i − u_i|.
double mawtNorm(const Eigen::Ref<const Eigen::VectorXd>& o, const ScalarizationParams& p);

/// Row minimizing mawtNorm, ties to the lowest row. With `upper`, only rows
/// strictly below it (by more than the dominance tolerance) compete; returns
/// nullopt when none does.
std::optional<Eigen::Index> solveScalarized(const Eigen::MatrixXd& objectives, const ScalarizationParams& p,
                                            const Eigen::VectorXd* upper = nullptr);

struct FrontierOptions {
  std::uint64_t iterationLimit = 0;  // point-producing solves; 0 means 10 per row
  std::uint64_t boxLimit = 50'000'000;  // scalarized solves of any kind
  bool recordPaths = false;             // fill FrontierPoint::pathProbabilities
};

struct FrontierRows {
  std::vector<Eigen::Index> rows;  // ascending
  std::uint64_t solves = 0;
};

/// Box-dissection MAWT scheme: every local upper bound of the found points is
/// searched until no box holds a new point.
FrontierRows frontierRows(const Eigen::MatrixXd& objectives, const FrontierOptions& options = {});

/// Pairwise filter: row i survives iff no row dominates it and no earlier row equals it.
std::vector<Eigen::Index> bruteForceFrontierRows(const Eigen::MatrixXd& objectives);

// ---------------------------------------------------------------------------
// Influence-diagram problems

struct MultiObjectiveProblem {
  const InfluenceDiagram* diagram = nullptr;
  StrategySpace space;
  std::vector<std::size_t> active;  // value-node ordinals competing in the frontier; empty means all

  MultiObjectiveProblem(const InfluenceDiagram& d, StrategySpace s, std::vector<std::size_t> mask = {});
  std::vector<std::size_t> activeObjectives() const;
};

/// expectedValues of every strategy in minimization form: rows by strategy index,
/// one column per value node.
Eigen::MatrixXd evaluateStrategies(const InfluenceDiagram& d, const StrategySpace& space,
                                   std::uint64_t ceiling = kDefaultStrategyCeiling);

struct FrontierPoint {
  std::uint64_t strategyIndex = 0;
  GlobalStrategy strategy;
  Eigen::VectorXd objectives;  // every value node, minimization form
  std::vector<std::pair<Path, double>> pathProbabilities;

  /// Values in the value nodes' own orientation.
  ObjectiveVector original(const std::vector<Orientation>& orientation) const;
};

struct ParetoFrontier {
  std::vector<std::string> names;        // value-node names
  std::vector<Orientation> orientation;  // of the value nodes
  std::vector<std::size_t> active;
  std::vector<FrontierPoint> points;     // ascending strategy index
  UtopiaNadir bounds;                    // over the active columns
  std::uint64_t solves = 0;

  /// Active columns of point i.
  Eigen::VectorXd activeObjectives(std::size_t i) const;
};

ParetoFrontier computeFrontier(const MultiObjectiveProblem& problem, const FrontierOptions& options = {});
ParetoFrontier bruteForceFrontier(const MultiObjectiveProblem& problem, const FrontierOptions& options = {});

/// The same variant working on a precomputed table (rows = strategy indices).
ParetoFrontier computeFrontier(const MultiObjectiveProblem& problem, const Eigen::MatrixXd& table,
                               const FrontierOptions& options = {});
ParetoFrontier bruteForceFrontier(const MultiObjectiveProblem& problem, const Eigen::MatrixXd& table,
                                  const FrontierOptions& options = {});

/// Single scalarized solve over every strategy.
FrontierPoint solveScalarized(const MultiObjectiveProblem& problem, const ScalarizationParams& p);

/// Set equality of the active objective vectors within the tolerance.
bool sameFrontier(const ParetoFrontier& a, const ParetoFrontier& b, double tol = kDominanceTolerance);

/// One row per point: strategy index, strategy encoding, then every objective in
/// the value nodes' own orientation.
std::string frontierToCsv(const InfluenceDiagram& d, const ParetoFrontier& frontier);

}  // namespace screenopt
