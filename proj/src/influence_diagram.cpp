#include "screenopt/influence_diagram.hpp"

#include "screenopt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace screenopt {

namespace {

constexpr double kRowSumTolerance = 1e-9;
constexpr std::size_t kMaxInformationStates = 10'000'000;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t saturatingMultiply(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > std::numeric_limits<std::uint64_t>::max() / b) return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

std::size_t infoIndex(const NodeLayout& layout, const Path& path) {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < layout.predecessorSlots.size(); ++i) {
    idx += static_cast<std::size_t>(path[layout.predecessorSlots[i]]) * layout.strides[i];
  }
  return idx;
}

}  // namespace

const char* toString(NodeKind kind) {
  switch (kind) {
    case NodeKind::Chance: return "chance";
    case NodeKind::Decision: return "decision";
    case NodeKind::Value: return "value";
  }
  return "?";
}

const char* toString(Orientation orientation) {
  return orientation == Orientation::Minimize ? "minimize" : "maximize";
}

const LocalStrategy* GlobalStrategy::find(NodeId node) const {
  for (const auto& l : locals) {
    if (l.node == node) return &l;
  }
  return nullptr;
}

Eigen::VectorXd ObjectiveVector::minimizationForm() const {
  Eigen::VectorXd out = values;
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    if (orientation[static_cast<std::size_t>(i)] == Orientation::Maximize) out[i] = -out[i];
  }
  return out;
}

// ---------------------------------------------------------------------------
// InfluenceDiagram

std::optional<std::size_t> InfluenceDiagram::positionOf(NodeId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const Node& InfluenceDiagram::node(NodeId id) const {
  auto pos = positionOf(id);
  if (!pos) throw std::out_of_range("unknown node " + std::to_string(id));
  return nodes_[*pos];
}

const NodeLayout& InfluenceDiagram::layout(NodeId id) const {
  auto pos = positionOf(id);
  if (!pos) throw std::out_of_range("unknown node " + std::to_string(id));
  return layouts_[*pos];
}

InformationSet InfluenceDiagram::informationSet(NodeId id) const {
  InformationSet set{id, {}};
  for (int slot : layout(id).predecessorSlots) set.predecessors.push_back(pathNodes_[slot]);
  return set;
}

std::size_t InfluenceDiagram::informationStateIndex(NodeId id, const Path& path) const {
  return infoIndex(layout(id), path);
}

std::vector<int> InfluenceDiagram::informationState(NodeId id, std::size_t index) const {
  const auto& lay = layout(id);
  std::vector<int> states(lay.predecessorSlots.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    states[i] = static_cast<int>(index / lay.strides[i]);
    index %= lay.strides[i];
  }
  return states;
}

std::string InfluenceDiagram::informationStateLabel(NodeId id, std::size_t index) const {
  const auto& lay = layout(id);
  auto states = informationState(id, index);
  std::string label;
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (i) label += '|';
    label += node(pathNodes_[lay.predecessorSlots[i]]).states[states[i]];
  }
  return label;
}

const Eigen::MatrixXd& InfluenceDiagram::cpt(NodeId id) const {
  auto pos = positionOf(id);
  if (!pos || nodes_[*pos].kind != NodeKind::Chance) {
    throw std::out_of_range("no CPT for node " + std::to_string(id));
  }
  return tables_[*pos];
}

const Eigen::VectorXd& InfluenceDiagram::utilities(NodeId id) const {
  auto pos = positionOf(id);
  if (!pos || nodes_[*pos].kind != NodeKind::Value) {
    throw std::out_of_range("no utilities for node " + std::to_string(id));
  }
  return utilities_[*pos];
}

// ---------------------------------------------------------------------------
// DiagramBuilder

DiagramBuilder& DiagramBuilder::chance(NodeId id, std::string name, std::vector<std::string> states) {
  nodes_.push_back({id, NodeKind::Chance, std::move(name), std::move(states), Orientation::Maximize, ""});
  return *this;
}

DiagramBuilder& DiagramBuilder::decision(NodeId id, std::string name, std::vector<std::string> states) {
  nodes_.push_back({id, NodeKind::Decision, std::move(name), std::move(states), Orientation::Maximize, ""});
  return *this;
}

DiagramBuilder& DiagramBuilder::value(NodeId id, std::string name, Orientation orientation, std::string unit) {
  nodes_.push_back({id, NodeKind::Value, std::move(name), {}, orientation, std::move(unit)});
  return *this;
}

DiagramBuilder& DiagramBuilder::arc(NodeId from, NodeId to) {
  arcs_.emplace_back(from, to);
  return *this;
}

DiagramBuilder& DiagramBuilder::cpt(NodeId node, Eigen::MatrixXd table) {
  denseTables_.emplace_back(node, std::move(table));
  return *this;
}

DiagramBuilder& DiagramBuilder::cptRow(NodeId node, std::vector<std::string> given, std::vector<double> probs) {
  rows_.push_back({node, std::move(given), std::move(probs)});
  return *this;
}

DiagramBuilder& DiagramBuilder::utilities(NodeId node, Eigen::VectorXd values) {
  denseUtilities_.emplace_back(node, std::move(values));
  return *this;
}

DiagramBuilder& DiagramBuilder::utilityRow(NodeId node, std::vector<std::string> given, double value) {
  rows_.push_back({node, std::move(given), {value}});
  return *this;
}

InfluenceDiagram DiagramBuilder::build() const {
  InfluenceDiagram d;
  auto issue = [&d](NodeId node, std::string row, std::string rule, std::string message) {
    d.buildIssues_.push_back({node, std::move(row), std::move(rule), std::move(message)});
  };

  for (const auto& n : nodes_) {
    if (d.index_.count(n.id)) {
      issue(n.id, "", "duplicate-id", "node id declared more than once");
      continue;
    }
    d.index_[n.id] = d.nodes_.size();
    d.nodes_.push_back(n);
  }
  const std::size_t count = d.nodes_.size();
  d.layouts_.resize(count);
  d.tables_.resize(count);
  d.utilities_.resize(count);
  d.arcs_ = arcs_;

  for (std::size_t pos = 0; pos < count; ++pos) {
    const auto& n = d.nodes_[pos];
    switch (n.kind) {
      case NodeKind::Chance:
        d.layouts_[pos].slot = static_cast<int>(d.pathNodes_.size());
        d.pathNodes_.push_back(n.id);
        d.chanceNodes_.push_back(n.id);
        break;
      case NodeKind::Decision:
        d.layouts_[pos].slot = static_cast<int>(d.pathNodes_.size());
        d.pathNodes_.push_back(n.id);
        d.decisionNodes_.push_back(n.id);
        break;
      case NodeKind::Value:
        d.valueNodes_.push_back(n.id);
        break;
    }
  }

  // Predecessor lists, declared order, duplicates and unusable arcs dropped.
  std::vector<std::set<std::size_t>> preds(count);
  for (const auto& [from, to] : arcs_) {
    auto pf = d.positionOf(from);
    auto pt = d.positionOf(to);
    if (!pf || !pt || *pf == *pt) continue;
    if (d.nodes_[*pf].kind == NodeKind::Value) continue;
    preds[*pt].insert(*pf);
  }
  for (std::size_t pos = 0; pos < count; ++pos) {
    auto& lay = d.layouts_[pos];
    std::vector<std::size_t> radices;
    for (std::size_t p : preds[pos]) {
      lay.predecessorSlots.push_back(d.layouts_[p].slot);
      radices.push_back(d.nodes_[p].states.size());
    }
    lay.strides.assign(radices.size(), 1);
    std::uint64_t total = 1;
    for (std::size_t i = radices.size(); i-- > 0;) {
      lay.strides[i] = static_cast<std::size_t>(total);
      total = saturatingMultiply(total, radices[i]);
    }
    if (total > kMaxInformationStates) {
      issue(d.nodes_[pos].id, "", "information-set-too-large", "more than 1e7 information states");
      total = 0;
    }
    lay.informationStates = static_cast<std::size_t>(total);
  }

  for (std::size_t pos = 0; pos < count; ++pos) {
    const auto& n = d.nodes_[pos];
    const auto infos = static_cast<Eigen::Index>(d.layouts_[pos].informationStates);
    if (n.kind == NodeKind::Chance) {
      d.tables_[pos] = Eigen::MatrixXd::Constant(infos, static_cast<Eigen::Index>(n.states.size()), kNaN);
    } else if (n.kind == NodeKind::Value) {
      d.utilities_[pos] = Eigen::VectorXd::Constant(infos, kNaN);
    }
  }

  for (const auto& [id, table] : denseTables_) {
    auto pos = d.positionOf(id);
    if (!pos || d.nodes_[*pos].kind != NodeKind::Chance) {
      issue(id, "", "cpt-on-non-chance", "CPT given for a node that is not a chance node");
      continue;
    }
    auto& target = d.tables_[*pos];
    if (table.rows() != target.rows() || table.cols() != target.cols()) {
      issue(id, "", "cpt-shape", "CPT has shape " + std::to_string(table.rows()) + "x" +
                                     std::to_string(table.cols()) + ", expected " +
                                     std::to_string(target.rows()) + "x" + std::to_string(target.cols()));
      continue;
    }
    target = table;
  }
  for (const auto& [id, values] : denseUtilities_) {
    auto pos = d.positionOf(id);
    if (!pos || d.nodes_[*pos].kind != NodeKind::Value) {
      issue(id, "", "values-on-non-value", "utilities given for a node that is not a value node");
      continue;
    }
    auto& target = d.utilities_[*pos];
    if (values.size() != target.size()) {
      issue(id, "", "values-shape", "utility vector has wrong length");
      continue;
    }
    target = values;
  }

  for (const auto& row : rows_) {
    auto pos = d.positionOf(row.node);
    if (!pos || d.nodes_[*pos].kind == NodeKind::Decision) {
      issue(row.node, "", "row-on-invalid-node", "table row given for an unknown or decision node");
      continue;
    }
    const auto& n = d.nodes_[*pos];
    const auto& lay = d.layouts_[*pos];
    std::string label;
    for (std::size_t i = 0; i < row.given.size(); ++i) label += (i ? "|" : "") + row.given[i];
    if (row.given.size() != lay.predecessorSlots.size()) {
      issue(n.id, label, "bad-row-reference", "row names " + std::to_string(row.given.size()) +
                                                  " states, information set has " +
                                                  std::to_string(lay.predecessorSlots.size()));
      continue;
    }
    std::size_t idx = 0;
    bool ok = true;
    for (std::size_t i = 0; i < row.given.size(); ++i) {
      const auto& predStates = d.node(d.pathNodes_[lay.predecessorSlots[i]]).states;
      auto it = std::find(predStates.begin(), predStates.end(), row.given[i]);
      if (it == predStates.end()) {
        issue(n.id, label, "bad-row-reference", "state '" + row.given[i] + "' is not a state of predecessor " +
                                                    std::to_string(d.pathNodes_[lay.predecessorSlots[i]]));
        ok = false;
        break;
      }
      idx += static_cast<std::size_t>(it - predStates.begin()) * lay.strides[i];
    }
    if (!ok) continue;
    if (n.kind == NodeKind::Chance) {
      if (row.entries.size() != n.states.size()) {
        issue(n.id, label, "cpt-shape", "row has " + std::to_string(row.entries.size()) + " probabilities for " +
                                            std::to_string(n.states.size()) + " states");
        continue;
      }
      for (std::size_t s = 0; s < row.entries.size(); ++s) {
        d.tables_[*pos](static_cast<Eigen::Index>(idx), static_cast<Eigen::Index>(s)) = row.entries[s];
      }
    } else {
      d.utilities_[*pos][static_cast<Eigen::Index>(idx)] = row.entries.front();
    }
  }
  return d;
}

// ---------------------------------------------------------------------------
// Validation

std::vector<Violation> validateDiagram(const InfluenceDiagram& d) {
  std::vector<Violation> out = d.buildIssues();
  auto add = [&out](NodeId node, std::string row, std::string rule, std::string message) {
    out.push_back({node, std::move(row), std::move(rule), std::move(message)});
  };

  for (std::size_t pos = 0; pos < d.nodeCount(); ++pos) {
    const auto& n = d.nodeAt(pos);
    if (n.kind == NodeKind::Value) {
      if (!n.states.empty()) add(n.id, "", "value-states", "value nodes carry no states");
      continue;
    }
    if (n.states.empty()) add(n.id, "", "empty-states", "state space is empty");
    std::set<std::string> seen;
    for (const auto& s : n.states) {
      if (!seen.insert(s).second) add(n.id, "", "duplicate-label", "state label '" + s + "' repeated");
    }
  }

  std::set<std::pair<NodeId, NodeId>> seenArcs;
  for (const auto& [from, to] : d.arcs()) {
    auto pf = d.positionOf(from);
    auto pt = d.positionOf(to);
    if (!pf || !pt) {
      add(pf ? to : from, "", "unknown-arc-endpoint",
          "arc " + std::to_string(from) + "->" + std::to_string(to) + " references an unknown node");
      continue;
    }
    if (!seenArcs.insert({from, to}).second) {
      add(to, "", "duplicate-arc", "arc " + std::to_string(from) + "->" + std::to_string(to) + " repeated");
    }
    if (from == to) {
      add(to, "", "self-loop", "arc from a node to itself");
      continue;
    }
    if (*pf >= *pt) {
      add(to, "", "topology",
          "arc " + std::to_string(from) + "->" + std::to_string(to) + " points against the declared order");
    }
    if (d.nodeAt(*pf).kind == NodeKind::Value) {
      add(from, "", "value-successor", "value node " + std::to_string(from) + " has a successor");
    }
  }

  for (NodeId id : d.chanceNodes()) {
    const auto& t = d.cpt(id);
    if (d.node(id).states.empty()) continue;
    if (t.rows() > 0 && t.array().isNaN().all()) {
      add(id, "", "missing-cpt", "chance node has no conditional probability table");
      continue;
    }
    for (Eigen::Index r = 0; r < t.rows(); ++r) {
      const auto label = d.informationStateLabel(id, static_cast<std::size_t>(r));
      auto row = t.row(r);
      if (row.hasNaN()) {
        add(id, label, "cpt-missing-row", "no probabilities for information state (" + label + ")");
        continue;
      }
      if ((row.array() < 0.0).any() || (row.array() > 1.0).any()) {
        add(id, label, "cpt-range", "probability outside [0,1] in row (" + label + ")");
      }
      const double sum = row.sum();
      if (std::abs(sum - 1.0) > kRowSumTolerance) {
        add(id, label, "cpt-row-sum", "row (" + label + ") sums to " + std::to_string(sum));
      }
    }
  }

  for (NodeId id : d.valueNodes()) {
    const auto& u = d.utilities(id);
    for (Eigen::Index r = 0; r < u.size(); ++r) {
      if (!std::isfinite(u[r])) {
        const auto label = d.informationStateLabel(id, static_cast<std::size_t>(r));
        add(id, label, "values-missing", "no finite utility for information state (" + label + ")");
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Paths

std::uint64_t pathCount(const InfluenceDiagram& d) {
  std::uint64_t total = 1;
  for (NodeId id : d.pathNodes()) total = saturatingMultiply(total, d.node(id).states.size());
  return total;
}

PathRange::iterator& PathRange::iterator::operator++() {
  for (std::size_t i = current_.size(); i-- > 0;) {
    if (++current_[i] < (*radices_)[i]) return *this;
    current_[i] = 0;
  }
  done_ = true;
  return *this;
}

PathRange::iterator PathRange::begin() const {
  iterator it;
  it.radices_ = &radices_;
  if (std::any_of(radices_.begin(), radices_.end(), [](int r) { return r <= 0; })) return it;
  it.current_.assign(radices_.size(), 0);
  it.done_ = false;
  return it;
}

PathRange enumeratePaths(const InfluenceDiagram& d, std::uint64_t ceiling) {
  const auto count = pathCount(d);
  if (count > ceiling) {
    throw CapacityError("diagram has " + std::to_string(count) + " paths, ceiling is " + std::to_string(ceiling));
  }
  std::vector<int> radices;
  for (NodeId id : d.pathNodes()) radices.push_back(static_cast<int>(d.node(id).states.size()));
  return PathRange(std::move(radices));
}

double upperBoundProbability(const InfluenceDiagram& d, const Path& path) {
  double p = 1.0;
  for (NodeId id : d.chanceNodes()) {
    const auto& lay = d.layout(id);
    const auto row = infoIndex(lay, path);
    const double entry = d.cpt(id)(static_cast<Eigen::Index>(row), path[lay.slot]);
    if (std::isnan(entry)) {
      throw StructuralError("node " + std::to_string(id) + ": missing CPT row (" +
                            d.informationStateLabel(id, row) + ")");
    }
    p *= entry;
  }
  return p;
}

bool isCompatible(const InfluenceDiagram& d, const Path& path, const GlobalStrategy& strategy) {
  for (std::size_t k = 0; k < d.decisionNodes().size(); ++k) {
    const NodeId id = d.decisionNodes()[k];
    const auto& lay = d.layout(id);
    const auto& local = strategy.locals.at(k);
    if (local.rule.at(infoIndex(lay, path)) != path[lay.slot]) return false;
  }
  return true;
}

double pathProbability(const InfluenceDiagram& d, const Path& path, const GlobalStrategy& strategy) {
  const double p = upperBoundProbability(d, path);
  return isCompatible(d, path, strategy) ? p : 0.0;
}

double utilityOf(const InfluenceDiagram& d, NodeId valueNode, const Path& path) {
  const auto& lay = d.layout(valueNode);
  const double u = d.utilities(valueNode)[static_cast<Eigen::Index>(infoIndex(lay, path))];
  if (std::isnan(u)) {
    throw StructuralError("value node " + std::to_string(valueNode) + ": missing utility (" +
                          d.informationStateLabel(valueNode, infoIndex(lay, path)) + ")");
  }
  return u;
}

namespace {

// Depth-first traversal over positive-probability, strategy-compatible paths.
class PositivePathWalker {
 public:
  PositivePathWalker(const InfluenceDiagram& d, const GlobalStrategy& z) : d_(d) {
    const auto& nodes = d.pathNodes();
    steps_.reserve(nodes.size());
    std::size_t k = 0;
    for (NodeId id : nodes) {
      Step step;
      step.id = id;
      step.layout = &d.layout(id);
      if (d.node(id).kind == NodeKind::Decision) {
        step.rule = &z.locals.at(k).rule;
        if (z.locals[k].node != id) throw std::invalid_argument("strategy does not match diagram decisions");
        if (step.rule->size() != step.layout->informationStates) {
          throw std::invalid_argument("local strategy for node " + std::to_string(id) + " has wrong size");
        }
        ++k;
      } else {
        step.table = &d.cpt(id);
      }
      steps_.push_back(step);
    }
    if (k != z.locals.size()) throw std::invalid_argument("strategy has extra local strategies");
    path_.assign(nodes.size(), 0);
  }

  template <class Leaf>
  void run(Leaf&& leaf) {
    visit(0, 1.0, leaf);
  }

 private:
  struct Step {
    NodeId id = 0;
    const NodeLayout* layout = nullptr;
    const Eigen::MatrixXd* table = nullptr;
    const std::vector<int>* rule = nullptr;
  };

  template <class Leaf>
  void visit(std::size_t slot, double prob, Leaf& leaf) {
    if (slot == steps_.size()) {
      leaf(path_, prob);
      return;
    }
    const auto& step = steps_[slot];
    const auto info = infoIndex(*step.layout, path_);
    if (step.rule) {
      path_[slot] = (*step.rule)[info];
      visit(slot + 1, prob, leaf);
      return;
    }
    const auto row = static_cast<Eigen::Index>(info);
    for (Eigen::Index s = 0; s < step.table->cols(); ++s) {
      const double p = (*step.table)(row, s);
      if (p == 0.0) continue;
      if (std::isnan(p)) {
        throw StructuralError("node " + std::to_string(step.id) + ": missing CPT row (" +
                              d_.informationStateLabel(step.id, info) + ")");
      }
      path_[slot] = static_cast<int>(s);
      visit(slot + 1, prob * p, leaf);
    }
  }

  const InfluenceDiagram& d_;
  std::vector<Step> steps_;
  Path path_;
};

}  // namespace

ObjectiveVector expectedValues(const InfluenceDiagram& d, const GlobalStrategy& strategy) {
  const auto& valueNodes = d.valueNodes();
  ObjectiveVector out;
  out.values = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(valueNodes.size()));
  std::vector<const NodeLayout*> layouts;
  std::vector<const Eigen::VectorXd*> utilities;
  for (NodeId v : valueNodes) {
    out.orientation.push_back(d.node(v).orientation);
    layouts.push_back(&d.layout(v));
    utilities.push_back(&d.utilities(v));
  }
  PositivePathWalker walker(d, strategy);
  walker.run([&](const Path& path, double prob) {
    for (std::size_t v = 0; v < layouts.size(); ++v) {
      const double u = (*utilities[v])[static_cast<Eigen::Index>(infoIndex(*layouts[v], path))];
      if (std::isnan(u)) {
        throw StructuralError("value node " + std::to_string(valueNodes[v]) + ": missing utility");
      }
      out.values[static_cast<Eigen::Index>(v)] += prob * u;
    }
  });
  return out;
}

std::vector<std::pair<Path, double>> positivePathProbabilities(const InfluenceDiagram& d,
                                                               const GlobalStrategy& strategy) {
  std::vector<std::pair<Path, double>> out;
  PositivePathWalker walker(d, strategy);
  walker.run([&](const Path& path, double prob) { out.emplace_back(path, prob); });
  return out;  // depth-first in state order is already lexicographic
}

// ---------------------------------------------------------------------------
// Strategies

StrategySpace::StrategySpace(const InfluenceDiagram& d) : decisions_(d.decisionNodes()) {
  for (NodeId id : decisions_) {
    std::vector<int> all(d.node(id).states.size());
    for (std::size_t s = 0; s < all.size(); ++s) all[s] = static_cast<int>(s);
    allowed_.emplace_back(d.layout(id).informationStates, all);
  }
}

void StrategySpace::restrict(NodeId decision, std::size_t informationState, std::vector<int> allowed) {
  auto it = std::find(decisions_.begin(), decisions_.end(), decision);
  if (it == decisions_.end()) throw std::invalid_argument("not a decision node: " + std::to_string(decision));
  auto& slots = allowed_[static_cast<std::size_t>(it - decisions_.begin())];
  if (informationState >= slots.size()) throw std::out_of_range("information state out of range");
  std::sort(allowed.begin(), allowed.end());
  allowed.erase(std::unique(allowed.begin(), allowed.end()), allowed.end());
  if (allowed.empty()) throw std::invalid_argument("restriction leaves no action");
  // Restrictions only narrow the current set.
  const auto& current = slots[informationState];
  for (int a : allowed) {
    if (std::find(current.begin(), current.end(), a) == current.end()) {
      throw std::invalid_argument("action " + std::to_string(a) + " not available at node " + std::to_string(decision));
    }
  }
  slots[informationState] = std::move(allowed);
}

void StrategySpace::restrictAll(NodeId decision, const std::vector<int>& allowed) {
  auto it = std::find(decisions_.begin(), decisions_.end(), decision);
  if (it == decisions_.end()) throw std::invalid_argument("not a decision node: " + std::to_string(decision));
  const auto n = allowed_[static_cast<std::size_t>(it - decisions_.begin())].size();
  for (std::size_t i = 0; i < n; ++i) restrict(decision, i, allowed);
}

std::uint64_t StrategySpace::count() const {
  std::uint64_t total = 1;
  for (const auto& node : allowed_) {
    for (const auto& a : node) total = saturatingMultiply(total, a.size());
  }
  return total;
}

GlobalStrategy StrategySpace::decode(std::uint64_t index) const {
  if (index >= count()) throw std::out_of_range("strategy index out of range");
  GlobalStrategy z;
  z.locals.resize(decisions_.size());
  for (std::size_t k = decisions_.size(); k-- > 0;) {
    auto& local = z.locals[k];
    local.node = decisions_[k];
    local.rule.resize(allowed_[k].size());
    for (std::size_t i = allowed_[k].size(); i-- > 0;) {
      const auto& a = allowed_[k][i];
      local.rule[i] = a[index % a.size()];
      index /= a.size();
    }
  }
  return z;
}

std::uint64_t StrategySpace::encode(const GlobalStrategy& strategy) const {
  if (strategy.locals.size() != decisions_.size()) throw std::invalid_argument("strategy shape mismatch");
  std::uint64_t index = 0;
  for (std::size_t k = 0; k < decisions_.size(); ++k) {
    const auto& rule = strategy.locals[k].rule;
    if (strategy.locals[k].node != decisions_[k] || rule.size() != allowed_[k].size()) {
      throw std::invalid_argument("strategy shape mismatch");
    }
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const auto& a = allowed_[k][i];
      auto it = std::find(a.begin(), a.end(), rule[i]);
      if (it == a.end()) throw std::invalid_argument("strategy uses a disallowed action");
      index = index * a.size() + static_cast<std::uint64_t>(it - a.begin());
    }
  }
  return index;
}

StrategyRange enumerateStrategies(const InfluenceDiagram& d, std::uint64_t ceiling) {
  return enumerateStrategies(StrategySpace(d), ceiling);
}

StrategyRange enumerateStrategies(const StrategySpace& space, std::uint64_t ceiling) {
  const auto count = space.count();
  if (count > ceiling) {
    throw CapacityError("strategy space has " + std::to_string(count) + " strategies, ceiling is " +
                        std::to_string(ceiling));
  }
  return StrategyRange(space);
}

int decisionIndicator(const GlobalStrategy& strategy, NodeId decision, std::size_t informationState, int state) {
  const auto* local = strategy.find(decision);
  if (!local) throw std::invalid_argument("strategy has no rule for node " + std::to_string(decision));
  return local->rule.at(informationState) == state ? 1 : 0;
}

std::vector<std::string> decisionProgrammingViolations(const InfluenceDiagram& d, const GlobalStrategy& strategy,
                                                       std::uint64_t ceiling) {
  std::vector<std::string> out;
  constexpr std::size_t kMaxReported = 20;
  auto fail = [&out](std::string msg) {
    if (out.size() < kMaxReported) out.push_back(std::move(msg));
  };
  const auto& decisions = d.decisionNodes();

  // z-sum: exactly one action per information state.
  for (NodeId j : decisions) {
    const auto states = static_cast<int>(d.node(j).states.size());
    for (std::size_t info = 0; info < d.informationStateCount(j); ++info) {
      int sum = 0;
      for (int s = 0; s < states; ++s) sum += decisionIndicator(strategy, j, info, s);
      if (sum != 1) fail("node " + std::to_string(j) + " (" + d.informationStateLabel(j, info) + "): z-sum is " +
                         std::to_string(sum));
    }
  }

  const double numDecisions = static_cast<double>(decisions.size());
  for (const Path& s : enumeratePaths(d, ceiling)) {
    const double p = upperBoundProbability(d, s);
    const double pi = pathProbability(d, s, strategy);
    double zsum = 0.0;
    for (NodeId j : decisions) {
      const auto& lay = d.layout(j);
      const int z = decisionIndicator(strategy, j, infoIndex(lay, s), s[lay.slot]);
      zsum += z;
      if (!(pi <= static_cast<double>(z))) fail("pi exceeds z at node " + std::to_string(j));
    }
    if (!(pi >= 0.0 && pi <= p)) fail("pi outside [0, p]");
    // Integer slack first so that a compatible path compares p with itself.
    if (!(pi >= p - (numDecisions - zsum))) fail("pi below p + sum z - |D|");
  }
  return out;
}

std::string encodeStrategy(const InfluenceDiagram& d, const GlobalStrategy& strategy) {
  std::string out;
  for (const auto& local : strategy.locals) {
    const auto& states = d.node(local.node).states;
    for (std::size_t info = 0; info < local.rule.size(); ++info) {
      if (!out.empty()) out += ';';
      out += std::to_string(local.node) + ':' + d.informationStateLabel(local.node, info) + "->" +
             states.at(static_cast<std::size_t>(local.rule[info]));
    }
  }
  return out;
}

}  // namespace screenopt
