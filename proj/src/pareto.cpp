#include "screenopt/pareto.hpp"

#include "screenopt/csv.hpp"
#include "screenopt/diagram_json.hpp"
#include "screenopt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace screenopt {

bool dominates(const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::Ref<const Eigen::VectorXd>& b, double tol) {
  bool strictly = false;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] > b[i] + tol) return false;
    if (a[i] < b[i] - tol) strictly = true;
  }
  return strictly;
}

bool sameObjectives(const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::Ref<const Eigen::VectorXd>& b,
                    double tol) {
  return ((a - b).array().abs() <= tol).all();
}

std::vector<Eigen::Index> bruteForceFrontierRows(const Eigen::MatrixXd& Y) {
  std::vector<Eigen::Index> out;
  for (Eigen::Index i = 0; i < Y.rows(); ++i) {
    bool keep = true;
    for (Eigen::Index j = 0; j < Y.rows() && keep; ++j) {
      if (j == i) continue;
      if (dominates(Y.row(j).transpose(), Y.row(i).transpose())) keep = false;
      if (j < i && sameObjectives(Y.row(j).transpose(), Y.row(i).transpose())) keep = false;
    }
    if (keep) out.push_back(i);
  }
  return out;
}

UtopiaNadir computeUtopiaNadir(const Eigen::MatrixXd& Y) {
  if (Y.rows() == 0) throw std::invalid_argument("computeUtopiaNadir: no strategies");
  UtopiaNadir out;
  out.utopia = Y.colwise().minCoeff().transpose();
  const auto rows = bruteForceFrontierRows(Y);
  out.nadir = Y.row(rows.front()).transpose();
  for (auto r : rows) out.nadir = out.nadir.cwiseMax(Y.row(r).transpose());
  return out;
}

double mawtNorm(const Eigen::Ref<const Eigen::VectorXd>& o, const ScalarizationParams& p) {
  const Eigen::ArrayXd terms = p.weights.array() * (o - p.utopia).array().abs();
  return terms.maxCoeff() + p.epsilon * terms.sum();
}

std::optional<Eigen::Index> solveScalarized(const Eigen::MatrixXd& Y, const ScalarizationParams& p,
                                            const Eigen::VectorXd* upper) {
  std::optional<Eigen::Index> best;
  double bestNorm = 0.0;
  for (Eigen::Index r = 0; r < Y.rows(); ++r) {
    if (upper && !((Y.row(r).transpose().array() < upper->array() - kDominanceTolerance).all())) continue;
    const double n = mawtNorm(Y.row(r).transpose(), p);
    if (!best || n < bestNorm) {
      best = r;
      bestNorm = n;
    }
  }
  return best;
}

namespace {

bool weaklyBelow(const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return (a.array() <= b.array()).all(); }

}  // namespace

FrontierRows frontierRows(const Eigen::MatrixXd& table, const FrontierOptions& options) {
  FrontierRows out;
  if (table.rows() == 0) return out;

  // Identical rows are interchangeable for the search; keep the first of each.
  std::vector<Eigen::Index> distinct;
  {
    std::map<std::vector<double>, Eigen::Index> seen;
    for (Eigen::Index r = 0; r < table.rows(); ++r) {
      std::vector<double> v(static_cast<std::size_t>(table.cols()));
      for (Eigen::Index c = 0; c < table.cols(); ++c) v[static_cast<std::size_t>(c)] = table(r, c);
      if (seen.emplace(std::move(v), r).second) distinct.push_back(r);
    }
  }
  Eigen::MatrixXd Y(static_cast<Eigen::Index>(distinct.size()), table.cols());
  for (std::size_t i = 0; i < distinct.size(); ++i) Y.row(static_cast<Eigen::Index>(i)) = table.row(distinct[i]);
  const Eigen::Index m = Y.cols();
  const std::uint64_t pointLimit =
      options.iterationLimit ? options.iterationLimit : 10 * static_cast<std::uint64_t>(Y.rows());

  const Eigen::VectorXd utopia = Y.colwise().minCoeff().transpose();
  std::vector<Eigen::VectorXd> bounds{(Y.colwise().maxCoeff().array() + 1.0).matrix().transpose()};
  std::vector<Eigen::Index> found;
  std::uint64_t pointSolves = 0;

  while (!bounds.empty()) {
    if (out.solves >= options.boxLimit) {
      throw IterationLimitError("frontier search exceeded " + std::to_string(options.boxLimit) + " box solves");
    }
    const Eigen::VectorXd u = bounds.back();
    bounds.pop_back();

    ScalarizationParams p;
    p.utopia = utopia;
    p.nadir = u;
    p.weights = (u - utopia).cwiseMax(1e-12).cwiseInverse();
    p.epsilon = 1e-4 / p.weights.sum();
    ++out.solves;
    const auto hit = solveScalarized(Y, p, &u);
    if (!hit) continue;
    if (++pointSolves > pointLimit) {
      throw IterationLimitError("frontier search exceeded " + std::to_string(pointLimit) + " scalarized solves");
    }

    // Replace the minimizer by an in-box dominator until none is left.
    Eigen::Index z = *hit;
    Eigen::Index steps = 0;
    for (bool moved = true; moved && steps < Y.rows(); ++steps) {
      moved = false;
      for (Eigen::Index r = 0; r < Y.rows(); ++r) {
        if (r != z && (Y.row(r).transpose().array() < u.array() - kDominanceTolerance).all() &&
            dominates(Y.row(r).transpose(), Y.row(z).transpose())) {
          z = r;
          moved = true;
        }
      }
    }
    found.push_back(z);
    const Eigen::VectorXd zv = Y.row(z).transpose();

    // Split every box that contains z.
    std::vector<Eigen::VectorXd> kept, children;
    if ((zv.array() < u.array()).all()) {
      for (Eigen::Index j = 0; j < m; ++j) {
        Eigen::VectorXd c = u;
        c[j] = zv[j];
        children.push_back(std::move(c));
      }
    } else {
      kept.push_back(u);
    }
    for (auto& b : bounds) {
      if ((zv.array() < b.array()).all()) {
        for (Eigen::Index j = 0; j < m; ++j) {
          Eigen::VectorXd c = b;
          c[j] = zv[j];
          children.push_back(std::move(c));
        }
      } else {
        kept.push_back(std::move(b));
      }
    }
    // A child lying weakly below another bound adds no search region.
    std::vector<Eigen::VectorXd> next = kept;
    for (std::size_t a = 0; a < children.size(); ++a) {
      bool redundant = false;
      for (const auto& b : kept) {
        if (weaklyBelow(children[a], b)) {
          redundant = true;
          break;
        }
      }
      for (std::size_t c = 0; c < children.size() && !redundant; ++c) {
        if (c == a || !weaklyBelow(children[a], children[c])) continue;
        // Among identical children keep the first.
        if (!weaklyBelow(children[c], children[a]) || c < a) redundant = true;
      }
      if (!redundant) next.push_back(children[a]);
    }
    bounds = std::move(next);
  }

  // Canonical representative: the lowest row with the same objectives.
  std::vector<Eigen::Index> rows;
  for (auto z : found) {
    Eigen::Index r = 0;
    while (!sameObjectives(table.row(r).transpose(), Y.row(z).transpose())) ++r;
    rows.push_back(r);
  }
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  for (auto r : rows) {
    bool keep = true;
    for (auto s : rows) {
      if (s == r) continue;
      if (dominates(table.row(s).transpose(), table.row(r).transpose()) ||
          (s < r && sameObjectives(table.row(s).transpose(), table.row(r).transpose()))) {
        keep = false;
        break;
      }
    }
    if (keep) out.rows.push_back(r);
  }
  return out;
}

// ---------------------------------------------------------------------------

MultiObjectiveProblem::MultiObjectiveProblem(const InfluenceDiagram& d, StrategySpace s,
                                             std::vector<std::size_t> mask)
    : diagram(&d), space(std::move(s)), active(std::move(mask)) {
  for (auto i : active) {
    if (i >= d.valueNodes().size()) {
      throw std::invalid_argument("objective mask refers to value node ordinal " + std::to_string(i));
    }
  }
}

std::vector<std::size_t> MultiObjectiveProblem::activeObjectives() const {
  if (!active.empty()) return active;
  std::vector<std::size_t> all(diagram->valueNodes().size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return all;
}

Eigen::MatrixXd evaluateStrategies(const InfluenceDiagram& d, const StrategySpace& space, std::uint64_t ceiling) {
  const auto range = enumerateStrategies(space, ceiling);
  Eigen::MatrixXd Y(static_cast<Eigen::Index>(range.size()), static_cast<Eigen::Index>(d.valueNodes().size()));
  for (auto it = range.begin(); it != range.end(); ++it) {
    Y.row(static_cast<Eigen::Index>(it.index())) = expectedValues(d, *it).minimizationForm().transpose();
  }
  return Y;
}

ObjectiveVector FrontierPoint::original(const std::vector<Orientation>& orientation) const {
  ObjectiveVector o;
  o.values = objectives;
  o.orientation = orientation;
  for (std::size_t i = 0; i < orientation.size(); ++i) {
    if (orientation[i] == Orientation::Maximize) o.values[static_cast<Eigen::Index>(i)] *= -1.0;
  }
  return o;
}

Eigen::VectorXd ParetoFrontier::activeObjectives(std::size_t i) const {
  Eigen::VectorXd v(static_cast<Eigen::Index>(active.size()));
  for (std::size_t c = 0; c < active.size(); ++c) {
    v[static_cast<Eigen::Index>(c)] = points[i].objectives[static_cast<Eigen::Index>(active[c])];
  }
  return v;
}

namespace {

Eigen::MatrixXd activeColumns(const Eigen::MatrixXd& table, const std::vector<std::size_t>& active) {
  Eigen::MatrixXd Y(table.rows(), static_cast<Eigen::Index>(active.size()));
  for (std::size_t c = 0; c < active.size(); ++c) {
    Y.col(static_cast<Eigen::Index>(c)) = table.col(static_cast<Eigen::Index>(active[c]));
  }
  return Y;
}

ParetoFrontier assemble(const MultiObjectiveProblem& problem, const Eigen::MatrixXd& table,
                        const std::vector<Eigen::Index>& rows, const FrontierOptions& options) {
  const auto& d = *problem.diagram;
  ParetoFrontier f;
  for (NodeId v : d.valueNodes()) {
    f.names.push_back(d.node(v).name);
    f.orientation.push_back(d.node(v).orientation);
  }
  f.active = problem.activeObjectives();
  const Eigen::MatrixXd Y = activeColumns(table, f.active);
  if (Y.rows() > 0) {
    f.bounds.utopia = Y.colwise().minCoeff().transpose();
    f.bounds.nadir = Y.row(rows.front()).transpose();
    for (auto r : rows) f.bounds.nadir = f.bounds.nadir.cwiseMax(Y.row(r).transpose());
  }
  for (auto r : rows) {
    FrontierPoint p;
    p.strategyIndex = static_cast<std::uint64_t>(r);
    p.strategy = problem.space.decode(p.strategyIndex);
    p.objectives = table.row(r).transpose();
    if (options.recordPaths) p.pathProbabilities = positivePathProbabilities(d, p.strategy);
    f.points.push_back(std::move(p));
  }
  return f;
}

void checkTable(const MultiObjectiveProblem& problem, const Eigen::MatrixXd& table) {
  if (static_cast<std::uint64_t>(table.rows()) != problem.space.count() ||
      table.cols() != static_cast<Eigen::Index>(problem.diagram->valueNodes().size())) {
    throw std::invalid_argument("objective table does not match the strategy space");
  }
}

}  // namespace

ParetoFrontier computeFrontier(const MultiObjectiveProblem& problem, const Eigen::MatrixXd& table,
                               const FrontierOptions& options) {
  checkTable(problem, table);
  const auto result = frontierRows(activeColumns(table, problem.activeObjectives()), options);
  auto f = assemble(problem, table, result.rows, options);
  f.solves = result.solves;
  return f;
}

ParetoFrontier bruteForceFrontier(const MultiObjectiveProblem& problem, const Eigen::MatrixXd& table,
                                  const FrontierOptions& options) {
  checkTable(problem, table);
  return assemble(problem, table, bruteForceFrontierRows(activeColumns(table, problem.activeObjectives())), options);
}

ParetoFrontier computeFrontier(const MultiObjectiveProblem& problem, const FrontierOptions& options) {
  return computeFrontier(problem, evaluateStrategies(*problem.diagram, problem.space), options);
}

ParetoFrontier bruteForceFrontier(const MultiObjectiveProblem& problem, const FrontierOptions& options) {
  return bruteForceFrontier(problem, evaluateStrategies(*problem.diagram, problem.space), options);
}

FrontierPoint solveScalarized(const MultiObjectiveProblem& problem, const ScalarizationParams& p) {
  const Eigen::MatrixXd table = evaluateStrategies(*problem.diagram, problem.space);
  const auto row = solveScalarized(activeColumns(table, problem.activeObjectives()), p);
  if (!row) throw std::invalid_argument("solveScalarized: empty strategy space");
  FrontierPoint out;
  out.strategyIndex = static_cast<std::uint64_t>(*row);
  out.strategy = problem.space.decode(out.strategyIndex);
  out.objectives = table.row(*row).transpose();
  return out;
}

bool sameFrontier(const ParetoFrontier& a, const ParetoFrontier& b, double tol) {
  if (a.points.size() != b.points.size() || a.active != b.active) return false;
  std::vector<bool> used(b.points.size(), false);
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    const Eigen::VectorXd va = a.activeObjectives(i);
    bool matched = false;
    for (std::size_t j = 0; j < b.points.size(); ++j) {
      if (!used[j] && sameObjectives(va, b.activeObjectives(j), tol)) {
        used[j] = true;
        matched = true;
        break;
      }
    }
    if (!matched) return false;
  }
  return true;
}

std::string frontierToCsv(const InfluenceDiagram& d, const ParetoFrontier& f) {
  std::string out = "strategy_index,strategy";
  for (const auto& n : f.names) out += "," + csvField(n);
  out += "\n";
  for (const auto& p : f.points) {
    out += std::to_string(p.strategyIndex) + "," + csvField(encodeStrategy(d, p.strategy));
    const auto o = p.original(f.orientation);
    for (Eigen::Index i = 0; i < o.values.size(); ++i) out += "," + formatDouble(o.values[i]);
    out += "\n";
  }
  return out;
}

}  // namespace screenopt
