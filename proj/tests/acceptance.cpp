// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "generators.hpp"
#include "oracles.hpp"

#include "screenopt/errors.hpp"
#include "screenopt/influence_diagram.hpp"
#include "screenopt/pareto.hpp"
#include "screenopt/phase1.hpp"
#include "screenopt/phase2.hpp"
#include "screenopt/report.hpp"
#include "screenopt/screening_model.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

using namespace screenopt;
using namespace screenopt::screening;
using namespace screenopt::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(const char* name, const std::function<Outcome()>& check) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%s %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), seconds);
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// Corpus shared by the first two criteria.
std::vector<std::pair<InfluenceDiagram, GlobalStrategy>> normalizationCorpus() {
  Rng rng(20240601);
  DiagramShape shape;
  shape.maxNodes = 8;
  shape.maxPaths = 10'000;
  std::vector<std::pair<InfluenceDiagram, GlobalStrategy>> out;
  for (int i = 0; i < 1000; ++i) {
    auto d = randomDiagram(rng, shape);
    auto z = randomStrategy(rng, d);
    out.emplace_back(std::move(d), std::move(z));
  }
  return out;
}

Outcome pathNormalization(const std::vector<std::pair<InfluenceDiagram, GlobalStrategy>>& corpus) {
  double worst = 0.0;
  int bad = 0;
  for (const auto& [d, z] : corpus) {
    double sum = 0.0;
    for (const auto& s : enumeratePaths(d)) sum += pathProbability(d, s, z);
    worst = std::max(worst, std::abs(sum - 1.0));
    if (std::abs(sum - 1.0) > 1e-9) ++bad;
  }
  return {bad == 0, std::to_string(corpus.size()) + " diagrams, max |sum - 1| = " + fmt("%.2e", worst)};
}

Outcome milpConstraints(const std::vector<std::pair<InfluenceDiagram, GlobalStrategy>>& corpus) {
  int bad = 0;
  std::uint64_t checked = 0;
  for (const auto& [d, z] : corpus) {
    if (!decisionProgrammingViolations(d, z).empty()) ++bad;
    // Independent restatement on every path.
    const double decisions = static_cast<double>(d.decisionNodes().size());
    bool ok = true;
    for (const auto& local : z.locals) {
      const int states = static_cast<int>(d.node(local.node).states.size());
      for (std::size_t info = 0; info < d.informationStateCount(local.node); ++info) {
        int sum = 0;
        for (int s = 0; s < states; ++s) sum += decisionIndicator(z, local.node, info, s);
        ok = ok && sum == 1;
      }
    }
    for (const auto& s : oracleAllPaths(d)) {
      const double pi = pathProbability(d, s, z);
      double p = 1.0;
      for (NodeId c : d.chanceNodes()) p *= d.cpt(c)(static_cast<Eigen::Index>(oracleInfoIndex(d, c, s)), s[static_cast<std::size_t>(d.layout(c).slot)]);
      double zsum = 0.0;
      for (const auto& local : z.locals) {
        const auto info = oracleInfoIndex(d, local.node, s);
        const int chosen = decisionIndicator(z, local.node, info, s[static_cast<std::size_t>(d.layout(local.node).slot)]);
        zsum += chosen;
        ok = ok && pi <= chosen;
      }
      ok = ok && pi >= 0.0 && pi <= p && pi >= p - (decisions - zsum);
      ++checked;
    }
    if (!ok) ++bad;
  }
  return {bad == 0, std::to_string(corpus.size()) + " diagrams, " + std::to_string(checked) + " paths, " +
                        std::to_string(bad) + " with violations"};
}

Outcome frontierOracle() {
  Rng rng(77);
  int bad = 0, instances = 0;
  std::size_t largest = 0;
  std::uint64_t strategies = 0;
  for (int t = 0; t < 200; ++t) {
    auto p = t == 0 ? syntheticDefaults() : randomParameters(rng, t % 4 != 0);
    p.options.fixExamToColonoscopy = t % 5 == 1;
    p.options.incentiveEnabled = t % 7 != 3;
    const Sex sex = t % 2 ? Sex::Male : Sex::Female;
    const int period = 1 + t % p.periods();
    const auto psi = t < 20 ? p.prevalence0(sex) : randomPrevalence(rng, 0.25);
    const auto d = buildSegmentDiagram({sex, period}, p, psi);
    std::vector<std::size_t> mask = {0, 1, 2, 3, 4};
    std::shuffle(mask.begin(), mask.end(), rng);
    mask.resize(static_cast<std::size_t>(2 + t % 4));
    std::sort(mask.begin(), mask.end());
    const MultiObjectiveProblem problem(d, segmentStrategySpace(d, p), mask);
    const auto table = evaluateStrategies(d, problem.space);
    const auto mawt = computeFrontier(problem, table);
    const auto brute = bruteForceFrontier(problem, table);

    std::vector<Eigen::VectorXd> rows, front;
    for (Eigen::Index i = 0; i < table.rows(); ++i) {
      Eigen::VectorXd v(static_cast<Eigen::Index>(mask.size()));
      for (std::size_t j = 0; j < mask.size(); ++j) v[static_cast<Eigen::Index>(j)] = table(i, static_cast<Eigen::Index>(mask[j]));
      rows.push_back(v);
    }
    for (std::size_t i = 0; i < mawt.points.size(); ++i) front.push_back(mawt.activeObjectives(i));
    if (!sameFrontier(mawt, brute) || !sameVectorSet(front, oracleNondominated(rows))) ++bad;
    largest = std::max(largest, mawt.points.size());
    strategies = std::max<std::uint64_t>(strategies, problem.space.count());
    ++instances;
  }
  return {bad == 0, std::to_string(instances) + " segment instances (<= " + std::to_string(strategies) +
                        " strategies, 2-5 objectives), largest frontier " + std::to_string(largest) + ", " +
                        std::to_string(bad) + " mismatches"};
}

Outcome prevalenceUpdate() {
  Rng rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0, simplexWorst = 0.0;
  bool negative = false;
  for (int t = 0; t < 10'000; ++t) {
    const auto psi = randomPrevalence(rng, 0.3);
    const Eigen::Vector3d found(psi[1] * u(rng), psi[2] * u(rng), psi[3] * u(rng));
    const TransitionRow tr{0.3 * u(rng), 0.3 * u(rng), 0.3 * u(rng)};
    const auto got = updatePrevalences(psi, {found[0], found[1], found[2]}, tr);
    const auto expected = oraclePrevalenceUpdate(psi, found, tr.normalBenign, tr.benignLarge, tr.largeCrc);
    worst = std::max(worst, (got - expected).cwiseAbs().maxCoeff());
    simplexWorst = std::max(simplexWorst, std::abs(got.sum() - 1.0));
    negative = negative || got.minCoeff() < 0.0;
  }
  const auto ex = updatePrevalences({0.9, 0.06, 0.03, 0.01}, {0.03, 0.02, 0.008}, {0.02, 0.1, 0.05});
  const double exampleErr = (ex - Eigen::Vector4d(0.94, 0.045, 0.0125, 0.0025)).cwiseAbs().maxCoeff();
  const bool pass = worst <= 1e-12 && simplexWorst <= 1e-12 && !negative && exampleErr <= 1e-15;
  return {pass, "1e4 triples max error " + fmt("%.2e", worst) + ", simplex " + fmt("%.2e", simplexWorst) +
                    ", worked example error " + fmt("%.2e", exampleErr)};
}

Outcome historyTreeOracle() {
  Rng rng(4242);
  int bad = 0, runs = 0;
  std::size_t histories = 0;
  for (int t = 0; t < 24; ++t) {
    auto p = t == 0 ? syntheticDefaults() : randomParameters(rng, true);
    p.options.fixExamToColonoscopy = true;
    const Sex sex = t % 2 ? Sex::Male : Sex::Female;
    // Budgets from slack to binding.
    const double budget = t % 3 == 0 ? 1e9 : (t % 3 == 1 ? 4000.0 : 1500.0);
    Phase1Options o;
    o.periods = 2;
    o.budget = budget;
    const auto expected = oracleHistoryTree(p, sex, 2, budget);
    std::vector<Eigen::VectorXd> got;
    try {
      const auto r = runPhase1(p, sex, o);
      for (const auto& h : r.histories) got.push_back(h.comparison());
      histories += r.histories.size();
    } catch (const EmptyFrontierError&) {
    }
    if (!sameVectorSet(got, expected, 1e-12)) ++bad;
    ++runs;
  }
  return {bad == 0, std::to_string(runs) + " K=2 instances (20 strategies per segment), " + std::to_string(histories) +
                        " surviving histories, " + std::to_string(bad) + " mismatches"};
}

Outcome phaseTwo() {
  Rng rng(5150);
  int bad = 0, overBudget = 0;
  for (int t = 0; t < 1000; ++t) {
    const auto p = randomSelectionProblem(rng, 8);
    const auto r = selectStrategies(p);
    const auto o = oraclePairScan(p);
    if (r.feasible != o.feasible) ++bad;
    if (o.feasible && (r.female != o.female || r.male != o.male || r.psiR != o.psiR)) ++bad;
    if (r.feasible && r.totalColonoscopies > p.budget) ++overBudget;
  }

  // Sweeps over synthetic pipelines.
  int sweepViolations = 0, pipelines = 0, infeasible = 0;
  Rng prng(8080);
  for (int t = 0; t < 6; ++t) {
    auto params = t == 0 ? syntheticDefaults() : randomParameters(prng, true);
    PipelineConfig c;
    c.periods = t == 0 ? 0 : 2;
    const auto result = runPipeline(params, c);
    double previous = INFINITY;
    for (const auto& s : result.cases) {
      if (!s.feasible) {
        ++infeasible;
        continue;
      }
      if (s.totalColonoscopies > s.budget) ++overBudget;
      if (s.psiR > previous) ++sweepViolations;
      previous = s.psiR;
    }
    ++pipelines;
  }
  return {bad == 0 && overBudget == 0 && sweepViolations == 0,
          "1000 problems, " + std::to_string(bad) + " mismatches, " + std::to_string(overBudget) +
              " over budget; " + std::to_string(pipelines) + " sweeps, " + std::to_string(sweepViolations) +
              " increases in psi_R, " + std::to_string(infeasible) + " infeasible cases"};
}

Outcome cptFidelity() {
  Rng rng(31337);
  double rowWorst = 0.0, stage8Worst = 0.0, posteriorWorst = 0.0;
  int incentiveBad = 0, segments = 0;
  for (int t = 0; t < 200; ++t) {
    const auto p = randomParameters(rng, t % 2 == 0);
    const auto psi = randomPrevalence(rng, 0.25);
    const Sex sex = t % 2 ? Sex::Male : Sex::Female;
    const int period = 1 + t % p.periods();
    const auto d = buildSegmentDiagram({sex, period}, p, psi);
    for (NodeId c : d.chanceNodes()) {
      const auto& m = d.cpt(c);
      for (Eigen::Index r = 0; r < m.rows(); ++r) rowWorst = std::max(rowWorst, std::abs(m.row(r).sum() - 1.0));
    }
    const double P = p.participation.returnOk(sex, period);
    if (d.cpt(node::kSample)(2 * kYes + kYes, kYes) != P + (1.0 - P) / 2.0) ++incentiveBad;
    const auto labels = p.cutoffLabels(sex);
    for (std::size_t l = 0; l < labels.size(); ++l) {
      const auto fi = p.fit.cutoffIndex(labels[l]);
      const auto expected = oracleColonoscopyRow(p, fi, psi);
      const auto row = d.cpt(node::kExamResult).row(static_cast<Eigen::Index>(4 * l + 2 * kYes + kExamColonoscopy));
      for (int c = 0; c < 5; ++c) stage8Worst = std::max(stage8Worst, std::abs(row[c] - expected[c]));
      posteriorWorst = std::max(posteriorWorst, std::abs(posteriorGivenPositive(p.fit, fi, psi).sum() - 1.0));
    }
    ++segments;
  }
  const bool pass = rowWorst <= 1e-9 && incentiveBad == 0 && stage8Worst <= 1e-12 && posteriorWorst <= 1e-12;
  return {pass, std::to_string(segments) + " segments, row sums " + fmt("%.2e", rowWorst) + ", stage-8 " +
                    fmt("%.2e", stage8Worst) + ", posterior sums " + fmt("%.2e", posteriorWorst) + ", " +
                    std::to_string(incentiveBad) + " incentive rows off"};
}

double minTotalCrc(const ParameterBundle& p, Sex sex, double budget) {
  Phase1Options o;
  o.periods = 3;
  o.budget = budget;
  try {
    const auto r = runPhase1(p, sex, o);
    double best = INFINITY;
    for (const auto& h : r.histories) best = std::min(best, h.totalPrevalence[3]);
    return best;
  } catch (const EmptyFrontierError&) {
    return INFINITY;
  }
}

Outcome behavioral() {
  Rng rng(1999);
  int noInviteBad = 0, cutoffBad = 0, budgetBad = 0, draws = 0, budgetSteps = 0;
  for (int t = 0; t < 50; ++t) {
    auto p = randomParameters(rng, true);
    const Sex sex = t % 2 ? Sex::Male : Sex::Female;
    const int period = 1 + t % p.periods();
    const auto d = buildSegmentDiagram({sex, period}, p, randomPrevalence(rng, 0.2));
    const auto space = segmentStrategySpace(d, p);
    const auto table = evaluateStrategies(d, space);
    for (std::uint64_t i = 0; i < space.count(); ++i) {
      const auto z = space.decode(i);
      const auto row = table.row(static_cast<Eigen::Index>(i));
      if (rootChoice(z, node::kInvite) == kNo && !row.isZero(0.0)) ++noInviteBad;
      // Same strategy with the next higher cut-off.
      const int cut = rootChoice(z, node::kCutoff);
      if (cut + 1 >= static_cast<int>(d.node(node::kCutoff).states.size())) continue;
      auto higher = z;
      higher.locals[0].rule[0] = cut + 1;
      const auto other = table.row(static_cast<Eigen::Index>(space.encode(higher)));
      // Minimization form: column 1 counts colonoscopies, detections are negated.
      if (row[1] < other[1] - 1e-12) ++cutoffBad;
      for (int j = 2; j < 5; ++j) {
        if (row[j] > other[j] + 1e-12) ++cutoffBad;
      }
    }

    // Budget relaxation, each budget its own Phase-1 run.
    p.options.fixExamToColonoscopy = true;
    double previous = INFINITY;
    for (double budget : {500.0, 1500.0, 3000.0, 6000.0, 1e9}) {
      const double best = minTotalCrc(p, sex, budget);
      if (best > previous + 1e-15) ++budgetBad;
      previous = best;
      ++budgetSteps;
    }
    ++draws;
  }
  return {noInviteBad == 0 && cutoffBad == 0 && budgetBad == 0,
          std::to_string(draws) + " draws: " + std::to_string(noInviteBad) + " non-zero no-invite rows, " +
              std::to_string(cutoffBad) + " cut-off monotonicity breaks, " + std::to_string(budgetBad) + " of " +
              std::to_string(budgetSteps) + " budget steps raised min total CRC"};
}

Outcome determinism() {
  const auto p = syntheticDefaults();
  const auto hash = inputHash(parametersToJson(p));
  const auto render = [&] {
    const auto r = runPipeline(p, {});
    return policyTableCsv(p, r, hash) + historiesCsv(p, r.female, hash) + historiesCsv(p, r.male, hash) +
           prevalenceSeriesCsv(p, r, hash) + baselineCsv(p, r.periods, hash);
  };
  const auto a = render();
  const auto b = render();
  return {a == b, "two full pipeline runs, " + std::to_string(a.size()) + " bytes of CSV, " +
                      (a == b ? "identical" : "different")};
}

}  // namespace

int main() {
  const auto corpus = normalizationCorpus();
  report("path-probability normalization", [&] { return pathNormalization(corpus); });
  report("decision-programming constraints", [&] { return milpConstraints(corpus); });
  report("frontier oracle equality", frontierOracle);
  report("prevalence update", prevalenceUpdate);
  report("history tree oracle equality", historyTreeOracle);
  report("phase-2 optimality and sweep", phaseTwo);
  report("CPT fidelity", cptFidelity);
  report("behavioral sanity", behavioral);
  report("determinism", determinism);
  return failures ? 1 : 0;
}
