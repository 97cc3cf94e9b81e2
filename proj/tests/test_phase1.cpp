#include "generators.hpp"
#include "oracles.hpp"

#include "screenopt/errors.hpp"
#include "screenopt/phase1.hpp"

#include <doctest.h>

using namespace screenopt;
using namespace screenopt::screening;
using namespace screenopt::testing;

TEST_CASE("prevalence update worked example") {
  const auto out = updatePrevalences({0.9, 0.06, 0.03, 0.01}, {0.03, 0.02, 0.008}, {0.02, 0.1, 0.05});
  CHECK(out[1] == doctest::Approx(0.045).epsilon(1e-15));
  CHECK(out[2] == doctest::Approx(0.0125).epsilon(1e-15));
  CHECK(out[3] == doctest::Approx(0.0025).epsilon(1e-15));
  CHECK(out[0] == doctest::Approx(0.94).epsilon(1e-15));
}

TEST_CASE("prevalence update fixed points") {
  const PrevalenceVector psi(0.8, 0.1, 0.07, 0.03);
  CHECK(updatePrevalences(psi, {}, {}) == psi);
  const auto cured = updatePrevalences(psi, {0.1, 0.07, 0.03}, {});
  CHECK(cured[0] == doctest::Approx(1.0));
  CHECK(cured.tail<3>().isZero(0.0));
  CHECK_THROWS_AS(updatePrevalences(psi, {0.2, 0, 0}, {}), DomainError);
}

TEST_CASE("natural rollout") {
  const PrevalenceVector psi(0.8, 0.1, 0.07, 0.03);
  const std::vector<TransitionRow> none(3);
  for (const auto& v : naturalProgressionRollout(psi, none, 3)) CHECK(v == psi);

  const std::vector<TransitionRow> t(4, TransitionRow{0.02, 0.1, 0.05});
  const auto series = naturalProgressionRollout(psi, t, 4);
  REQUIRE(series.size() == 4);
  CHECK((series[0] - oraclePrevalenceUpdate(psi, Eigen::Vector3d::Zero(), 0.02, 0.1, 0.05)).norm() < 1e-15);
  for (std::size_t k = 1; k < series.size(); ++k) CHECK(series[k][3] >= series[k - 1][3]);
}

TEST_CASE("K = 1 is the period-1 frontier") {
  const auto p = syntheticDefaults();
  Phase1Options o;
  o.budget = 1e9;
  o.periods = 1;
  for (Sex sex : kSexes) {
    const auto r = runPhase1(p, sex, o);
    const auto front = segmentFrontier(p, sex, 1, p.prevalence0(sex), o);
    REQUIRE(r.histories.size() == front.points.size());
    for (std::size_t i = 0; i < front.points.size(); ++i) {
      CHECK(r.histories[i].periods.size() == 1);
      CHECK(r.histories[i].last().strategyIndex == front.points[i].strategyIndex);
    }
  }
}

TEST_CASE("budget zero keeps only unscreened histories") {
  const auto p = syntheticDefaults();
  Phase1Options o;
  o.budget = 0;
  o.periods = 3;
  for (Sex sex : kSexes) {
    const auto r = runPhase1(p, sex, o);
    REQUIRE(!r.histories.empty());
    // Natural progression by hand: the period-k post vector of the rollout.
    Eigen::Vector4d psi = p.prevalence0(sex);
    double weighted = 0.0, people = 0.0;
    for (int k = 1; k <= 3; ++k) {
      const auto& t = p.transitions.at(sex, k);
      psi = oraclePrevalenceUpdate(psi, Eigen::Vector3d::Zero(), t.normalBenign, t.benignLarge, t.largeCrc);
      weighted += p.population.cohort(sex, k) * psi[3];
      people += p.population.cohort(sex, k);
    }
    for (const auto& h : r.histories) {
      CHECK(h.cumulativeColonoscopies == 0.0);
      for (const auto& rec : h.periods) CHECK(rootChoice(rec.strategy, node::kInvite) == kNo);
      CHECK(h.totalPrevalence[3] == doctest::Approx(weighted / people).epsilon(1e-14));
      CHECK(h.last().post[3] == doctest::Approx(psi[3]).epsilon(1e-14));
    }
  }
}

TEST_CASE("negative budget empties the tree") {
  Phase1Options o;
  o.budget = -1;
  CHECK_THROWS_AS(runPhase1(syntheticDefaults(), Sex::Female, o), EmptyFrontierError);
}

TEST_CASE("history cap") {
  Phase1Options o;
  o.budget = 1e9;
  o.periods = 2;
  o.historyCap = 3;
  CHECK_THROWS_AS(runPhase1(syntheticDefaults(), Sex::Male, o), CapacityError);
}

TEST_CASE("removeDominated keeps ties") {
  const auto p = syntheticDefaults();
  const auto d = buildSegmentDiagram({Sex::Female, 1}, p, p.prevalence0(Sex::Female));
  const auto space = segmentStrategySpace(d, p);
  const auto z = space.decode(0);
  Eigen::VectorXd obj = expectedValues(d, z).minimizationForm();
  const auto h = extendHistory({}, p, Sex::Female, 1, p.prevalence0(Sex::Female), 0, z, obj);
  CHECK(removeDominated({h, h}).size() == 2);
  auto worse = h;
  worse.cumulativeColonoscopies += 1;
  CHECK(removeDominated({worse, h}).size() == 1);
}

TEST_CASE("history bookkeeping") {
  const auto p = syntheticDefaults();
  Phase1Options o;
  o.budget = 1e9;
  o.periods = 2;
  const auto r = runPhase1(p, Sex::Female, o);
  REQUIRE(!r.histories.empty());
  for (std::size_t i = 1; i < r.histories.size(); ++i) CHECK(r.histories[i - 1].key() < r.histories[i].key());
  for (const auto& h : r.histories) {
    double col = 0.0;
    for (const auto& rec : h.periods) col += rec.colonoscopies;
    CHECK(h.cumulativeColonoscopies == doctest::Approx(col));
    const double n1 = p.population.cohort(Sex::Female, 1), n2 = p.population.cohort(Sex::Female, 2);
    const double expected = (n1 * h.periods[0].post[3] + n2 * h.periods[1].post[3]) / (n1 + n2);
    CHECK(h.totalPrevalence[3] == doctest::Approx(expected).epsilon(1e-14));
    CHECK((h.periods[1].start - h.periods[0].post).norm() == 0.0);
  }
}

TEST_CASE("small tree against the exhaustive search") {
  Rng rng(21);
  for (int t = 0; t < 3; ++t) {
    auto p = randomParameters(rng, true);
    p.options.fixExamToColonoscopy = true;
    Phase1Options o;
    o.periods = 2;
    o.budget = 1e9;
    const Sex sex = t % 2 ? Sex::Male : Sex::Female;
    const auto r = runPhase1(p, sex, o);
    std::vector<Eigen::VectorXd> got;
    for (const auto& h : r.histories) got.push_back(h.comparison());
    CHECK(sameVectorSet(got, oracleHistoryTree(p, sex, 2, o.budget), 1e-12));
  }
}
