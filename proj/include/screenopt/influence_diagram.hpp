#pragma once

// Discrete influence diagrams with Decision-Programming path semantics.
//
// A diagram is a list of nodes in declared (topological) order. Chance and
// decision nodes carry a finite state space; value nodes carry a utility map
// over their information states. A path assigns one state ordinal to every
// chance and decision node, in declared order.

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <iterator>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace screenopt {

using NodeId = std::uint32_t;

enum class NodeKind { Chance, Decision, Value };
enum class Orientation { Minimize, Maximize };

const char* toString(NodeKind kind);
const char* toString(Orientation orientation);

struct Node {
  NodeId id = 0;
  NodeKind kind = NodeKind::Chance;
  std::string name;
  std::vector<std::string> states;  // empty for value nodes
  Orientation orientation = Orientation::Maximize;  // value nodes only
  std::string unit;                                  // value nodes only
};

struct InformationSet {
  NodeId node = 0;
  std::vector<NodeId> predecessors;  // declared order
};

/// Precomputed indexing of one node's information states. Predecessor slots
/// index into a Path; the first predecessor is the most significant digit.
struct NodeLayout {
  int slot = -1;  // position inside a Path, -1 for value nodes
  std::vector<int> predecessorSlots;
  std::vector<std::size_t> strides;
  std::size_t informationStates = 1;
};

using Path = std::vector<int>;

struct LocalStrategy {
  NodeId node = 0;
  std::vector<int> rule;  // rule[informationState] = chosen state ordinal
};

struct GlobalStrategy {
  std::vector<LocalStrategy> locals;  // one per decision node, declared order

  const LocalStrategy* find(NodeId node) const;
  bool operator==(const GlobalStrategy&) const = default;
};

struct ObjectiveVector {
  Eigen::VectorXd values;
  std::vector<Orientation> orientation;

  /// Maximization components negated.
  Eigen::VectorXd minimizationForm() const;
};

struct Violation {
  NodeId node = 0;
  std::string row;  // information-state label when the rule concerns a table row
  std::string rule;
  std::string message;
};

class DiagramBuilder;

class InfluenceDiagram {
 public:
  std::size_t nodeCount() const { return nodes_.size(); }
  const Node& nodeAt(std::size_t position) const { return nodes_[position]; }
  const NodeLayout& layoutAt(std::size_t position) const { return layouts_[position]; }
  std::optional<std::size_t> positionOf(NodeId id) const;
  /// Throws std::out_of_range for unknown ids.
  const Node& node(NodeId id) const;
  const NodeLayout& layout(NodeId id) const;

  const std::vector<std::pair<NodeId, NodeId>>& arcs() const { return arcs_; }
  InformationSet informationSet(NodeId id) const;
  std::size_t informationStateCount(NodeId id) const { return layout(id).informationStates; }
  std::size_t informationStateIndex(NodeId id, const Path& path) const;
  /// Predecessor state ordinals for an information-state index.
  std::vector<int> informationState(NodeId id, std::size_t index) const;
  /// Predecessor state labels joined with '|'; empty for an empty information set.
  std::string informationStateLabel(NodeId id, std::size_t index) const;

  /// Chance nodes: rows = information states, columns = node states. NaN marks a missing row.
  const Eigen::MatrixXd& cpt(NodeId id) const;
  /// Value nodes: one utility per information state. NaN marks a missing entry.
  const Eigen::VectorXd& utilities(NodeId id) const;

  /// Chance and decision nodes in declared order; index = path slot.
  const std::vector<NodeId>& pathNodes() const { return pathNodes_; }
  const std::vector<NodeId>& decisionNodes() const { return decisionNodes_; }
  const std::vector<NodeId>& chanceNodes() const { return chanceNodes_; }
  const std::vector<NodeId>& valueNodes() const { return valueNodes_; }

  /// Problems detected while assembling the diagram (unknown labels, bad shapes).
  const std::vector<Violation>& buildIssues() const { return buildIssues_; }

 private:
  friend class DiagramBuilder;

  std::vector<Node> nodes_;
  std::vector<NodeLayout> layouts_;
  std::vector<Eigen::MatrixXd> tables_;    // per position, chance nodes only
  std::vector<Eigen::VectorXd> utilities_; // per position, value nodes only
  std::vector<std::pair<NodeId, NodeId>> arcs_;
  std::map<NodeId, std::size_t> index_;
  std::vector<NodeId> pathNodes_, decisionNodes_, chanceNodes_, valueNodes_;
  std::vector<Violation> buildIssues_;
};

/// Assembles an InfluenceDiagram. Structural problems are recorded, not thrown,
/// so that validateDiagram can report them.
class DiagramBuilder {
 public:
  DiagramBuilder& chance(NodeId id, std::string name, std::vector<std::string> states);
  DiagramBuilder& decision(NodeId id, std::string name, std::vector<std::string> states);
  DiagramBuilder& value(NodeId id, std::string name, Orientation orientation, std::string unit);
  DiagramBuilder& arc(NodeId from, NodeId to);

  /// Dense table, rows in information-state order.
  DiagramBuilder& cpt(NodeId node, Eigen::MatrixXd table);
  DiagramBuilder& cptRow(NodeId node, std::vector<std::string> given, std::vector<double> probs);
  DiagramBuilder& utilities(NodeId node, Eigen::VectorXd values);
  DiagramBuilder& utilityRow(NodeId node, std::vector<std::string> given, double value);

  InfluenceDiagram build() const;

 private:
  struct PendingRow {
    NodeId node;
    std::vector<std::string> given;
    std::vector<double> entries;
  };
  std::vector<Node> nodes_;
  std::vector<std::pair<NodeId, NodeId>> arcs_;
  std::vector<std::pair<NodeId, Eigen::MatrixXd>> denseTables_;
  std::vector<std::pair<NodeId, Eigen::VectorXd>> denseUtilities_;
  std::vector<PendingRow> rows_;
};

/// Empty iff every structural invariant holds.
std::vector<Violation> validateDiagram(const InfluenceDiagram& d);

// ---------------------------------------------------------------------------
// Paths

/// Number of paths, saturating at UINT64_MAX.
std::uint64_t pathCount(const InfluenceDiagram& d);

class PathRange {
 public:
  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = Path;
    using difference_type = std::ptrdiff_t;
    using pointer = const Path*;
    using reference = const Path&;

    iterator() = default;
    const Path& operator*() const { return current_; }
    const Path* operator->() const { return &current_; }
    iterator& operator++();
    void operator++(int) { ++*this; }
    bool operator==(const iterator& o) const { return done_ == o.done_ && (done_ || current_ == o.current_); }

   private:
    friend class PathRange;
    const std::vector<int>* radices_ = nullptr;
    Path current_;
    bool done_ = true;
  };

  explicit PathRange(std::vector<int> radices) : radices_(std::move(radices)) {}
  iterator begin() const;
  iterator end() const { return {}; }

 private:
  std::vector<int> radices_;
};

inline constexpr std::uint64_t kDefaultPathCeiling = 100'000'000;
inline constexpr std::uint64_t kDefaultStrategyCeiling = 10'000'000;

/// Lexicographic order, first node most significant.
PathRange enumeratePaths(const InfluenceDiagram& d, std::uint64_t ceiling = kDefaultPathCeiling);

/// Product of CPT entries along the path over chance nodes.
double upperBoundProbability(const InfluenceDiagram& d, const Path& path);
bool isCompatible(const InfluenceDiagram& d, const Path& path, const GlobalStrategy& strategy);
double pathProbability(const InfluenceDiagram& d, const Path& path, const GlobalStrategy& strategy);
double utilityOf(const InfluenceDiagram& d, NodeId valueNode, const Path& path);

/// Σ_s π(s) U_v(s) for every value node v, in declared order. Zero-probability
/// subtrees are skipped, so the cost scales with the number of positive paths.
ObjectiveVector expectedValues(const InfluenceDiagram& d, const GlobalStrategy& strategy);

/// All paths with π(s) > 0 under the strategy, lexicographically sorted.
std::vector<std::pair<Path, double>> positivePathProbabilities(const InfluenceDiagram& d,
                                                               const GlobalStrategy& strategy);

// ---------------------------------------------------------------------------
// Strategies

/// The set of admissible global strategies: for every decision node and
/// information state, a list of allowed actions. Defaults to all states.
class StrategySpace {
 public:
  explicit StrategySpace(const InfluenceDiagram& d);

  void restrict(NodeId decision, std::size_t informationState, std::vector<int> allowed);
  void restrictAll(NodeId decision, const std::vector<int>& allowed);

  /// Saturates at UINT64_MAX.
  std::uint64_t count() const;
  GlobalStrategy decode(std::uint64_t index) const;
  std::uint64_t encode(const GlobalStrategy& strategy) const;

  const std::vector<NodeId>& decisions() const { return decisions_; }
  const std::vector<int>& allowed(std::size_t decisionOrdinal, std::size_t informationState) const {
    return allowed_[decisionOrdinal][informationState];
  }

 private:
  std::vector<NodeId> decisions_;
  std::vector<std::vector<std::vector<int>>> allowed_;
};

class StrategyRange {
 public:
  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = GlobalStrategy;
    using difference_type = std::ptrdiff_t;
    using pointer = void;
    using reference = GlobalStrategy;

    iterator() = default;
    GlobalStrategy operator*() const { return space_->decode(index_); }
    iterator& operator++() {
      ++index_;
      return *this;
    }
    void operator++(int) { ++index_; }
    bool operator==(const iterator& o) const { return index_ == o.index_; }
    std::uint64_t index() const { return index_; }

   private:
    friend class StrategyRange;
    const StrategySpace* space_ = nullptr;
    std::uint64_t index_ = 0;
  };

  explicit StrategyRange(StrategySpace space) : space_(std::move(space)), count_(space_.count()) {}
  iterator begin() const { return make(0); }
  iterator end() const { return make(count_); }
  std::uint64_t size() const { return count_; }

 private:
  iterator make(std::uint64_t i) const {
    iterator it;
    it.space_ = &space_;
    it.index_ = i;
    return it;
  }
  StrategySpace space_;
  std::uint64_t count_;
};

/// Every strategy once, in index order. Throws CapacityError above the ceiling.
StrategyRange enumerateStrategies(const InfluenceDiagram& d,
                                  std::uint64_t ceiling = kDefaultStrategyCeiling);
StrategyRange enumerateStrategies(const StrategySpace& space,
                                  std::uint64_t ceiling = kDefaultStrategyCeiling);

/// z(s_j | s_I(j)) for the strategy: 1 when the strategy picks `state`.
int decisionIndicator(const GlobalStrategy& strategy, NodeId decision, std::size_t informationState,
                      int state);

/// Checks the Decision-Programming constraints on (Z, π): every local rule
/// selects exactly one action, 0 ≤ π ≤ p, π ≤ z on every path and decision,
/// and π ≥ p + Σz − |D|. Returns human-readable failures; empty means all hold.
std::vector<std::string> decisionProgrammingViolations(const InfluenceDiagram& d,
                                                       const GlobalStrategy& strategy,
                                                       std::uint64_t ceiling = kDefaultPathCeiling);

/// "node:infostate->action" triples joined by ';'. Information-state labels are joined by '|'.
std::string encodeStrategy(const InfluenceDiagram& d, const GlobalStrategy& strategy);

}  // namespace screenopt
