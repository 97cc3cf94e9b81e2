#include "screenopt/phase1.hpp"

#include "screenopt/diagram_json.hpp"
#include "screenopt/errors.hpp"

#include <algorithm>
#include <array>
#include <map>

namespace screenopt::screening {

PrevalenceVector updatePrevalences(const PrevalenceVector& psi, const DetectedFractions& found,
                                   const TransitionRow& t) {
  const std::array<double, 3> f = {found.benign, found.large, found.crc};
  static constexpr const char* names[] = {"benign", "large", "crc"};
  std::array<double, 3> left{};
  for (int b = 0; b < 3; ++b) {
    if (f[b] < -1e-12 || f[b] > psi[b + 1] + 1e-12) {
      throw DomainError(std::string("detected ") + names[b] + " fraction " + formatDouble(f[b]) +
                        " outside [0, " + formatDouble(psi[b + 1]) + "]");
    }
    left[b] = std::max(psi[b + 1] - f[b], 0.0);
  }
  PrevalenceVector out;
  out[1] = left[0] * (1.0 - t.benignLarge) + psi[0] * t.normalBenign;
  out[2] = left[1] * (1.0 - t.largeCrc) + left[0] * t.benignLarge;
  out[3] = left[2] + left[1] * t.largeCrc;
  out[0] = 1.0 - out[1] - out[2] - out[3];
  if (out[0] < 0.0 && out[0] > -1e-12) out[0] = 0.0;
  return out;
}

std::vector<PrevalenceVector> naturalProgressionRollout(const PrevalenceVector& psi0,
                                                        const std::vector<TransitionRow>& transitions,
                                                        int periods) {
  std::vector<PrevalenceVector> out;
  PrevalenceVector psi = psi0;
  for (int k = 0; k < periods; ++k) {
    psi = updatePrevalences(psi, {}, transitions.at(static_cast<std::size_t>(k)));
    out.push_back(psi);
  }
  return out;
}

DetectedFractions detectedFractionsOf(const FrontierPoint& point) {
  // Detection value nodes are maximized, so the stored minimization form is negated.
  return {-point.objectives[2], -point.objectives[3], -point.objectives[4]};
}

std::vector<std::uint64_t> StrategyHistory::key() const {
  std::vector<std::uint64_t> k;
  for (const auto& p : periods) k.push_back(p.strategyIndex);
  return k;
}

Eigen::Vector4d StrategyHistory::comparison() const {
  return {totalPrevalence[3], last().post[3], last().post[2], cumulativeColonoscopies};
}

StrategyHistory extendHistory(const StrategyHistory& base, const ParameterBundle& params, Sex sex, int period,
                              const PrevalenceVector& start, std::uint64_t strategyIndex,
                              const GlobalStrategy& strategy, const Eigen::VectorXd& objectives) {
  StrategyHistory h = base;
  PeriodRecord r;
  r.period = period;
  r.strategyIndex = strategyIndex;
  r.strategy = strategy;
  r.objectives = objectives;
  r.start = start;
  r.post = updatePrevalences(start, {-objectives[2], -objectives[3], -objectives[4]},
                             params.transitions.at(sex, period));
  const double cohort = params.population.cohort(sex, period);
  r.colonoscopies = cohort * objectives[1];
  r.cost = cohort * objectives[0];

  const double before = params.population.total(sex, period - 1);
  const double after = before + cohort;
  h.totalPrevalence = (h.totalPrevalence * before + r.post * cohort) / after;
  h.cumulativeColonoscopies += r.colonoscopies;
  h.cumulativeCost += r.cost;
  h.periods.push_back(std::move(r));
  return h;
}

std::vector<StrategyHistory> removeDominated(std::vector<StrategyHistory> histories) {
  std::vector<Eigen::Vector4d> keys;
  keys.reserve(histories.size());
  for (const auto& h : histories) keys.push_back(h.comparison());
  std::vector<StrategyHistory> out;
  for (std::size_t i = 0; i < histories.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < histories.size() && !dominated; ++j) {
      dominated = j != i && dominates(keys[j], keys[i]);
    }
    if (!dominated) out.push_back(std::move(histories[i]));
  }
  return out;
}

ParetoFrontier segmentFrontier(const ParameterBundle& params, Sex sex, int period, const PrevalenceVector& psi,
                               const Phase1Options& options, std::uint64_t* solves) {
  const auto d = buildSegmentDiagram({sex, period}, params, psi);
  MultiObjectiveProblem problem(d, segmentStrategySpace(d, params), options.objectiveMask);
  const Eigen::MatrixXd table = evaluateStrategies(d, problem.space);
  if (options.method == FrontierMethod::BruteForce) return bruteForceFrontier(problem, table, options.frontier);
  auto f = computeFrontier(problem, table, options.frontier);
  if (solves) *solves += f.solves;
  if (options.crossCheck && !sameFrontier(f, bruteForceFrontier(problem, table))) {
    throw OracleMismatchError(std::string("frontier cross-check failed for segment ") + code(sex) + " period " +
                              std::to_string(period));
  }
  return f;
}

namespace {

bool byKey(const StrategyHistory& a, const StrategyHistory& b) { return a.key() < b.key(); }

}  // namespace

Phase1Result runPhase1(const ParameterBundle& params, Sex sex, const Phase1Options& options) {
  const int periods = options.periods > 0 ? options.periods : params.periods();
  if (periods > params.periods()) {
    throw std::invalid_argument("requested " + std::to_string(periods) + " periods, parameters cover " +
                                std::to_string(params.periods()));
  }
  Phase1Result result;
  result.sex = sex;

  std::vector<StrategyHistory> histories{StrategyHistory{}};
  for (int k = 1; k <= periods; ++k) {
    std::map<std::array<double, 4>, ParetoFrontier> cache;
    std::vector<StrategyHistory> next;
    for (const auto& h : histories) {
      const PrevalenceVector start = k == 1 ? params.prevalence0(sex) : h.last().post;
      const std::array<double, 4> at = {start[0], start[1], start[2], start[3]};
      auto it = cache.find(at);
      if (it == cache.end()) {
        it = cache.emplace(at, segmentFrontier(params, sex, k, start, options, &result.frontierSolves)).first;
      }
      for (const auto& p : it->second.points) {
        auto e = extendHistory(h, params, sex, k, start, p.strategyIndex, p.strategy, p.objectives);
        if (e.cumulativeColonoscopies > options.budget) continue;
        next.push_back(std::move(e));
        if (next.size() > options.historyCap) {
          throw CapacityError("period " + std::to_string(k) + " exceeds the history cap of " +
                              std::to_string(options.historyCap));
        }
      }
    }
    if (next.empty()) {
      throw EmptyFrontierError(std::string("budget ") + formatDouble(options.budget) +
                               " removes every strategy history for sex " + code(sex) + " at period " +
                               std::to_string(k));
    }
    if (k > 1) next = removeDominated(std::move(next));
    std::sort(next.begin(), next.end(), byKey);
    result.survivorsPerPeriod.push_back(next.size());
    histories = std::move(next);
  }
  result.histories = std::move(histories);
  return result;
}

}  // namespace screenopt::screening
