#include "generators.hpp"
#include "oracles.hpp"

#include "screenopt/errors.hpp"
#include "screenopt/screening_model.hpp"

#include <doctest.h>

using namespace screenopt;
using namespace screenopt::screening;
using namespace screenopt::testing;

namespace {

FitTestCharacteristics oneCutoff(double sB, double sL, double sR, double spec) {
  FitTestCharacteristics fit;
  fit.cutoffs = {"x"};
  fit.sensitivity.resize(1, 3);
  fit.sensitivity << sB, sL, sR;
  fit.specificity = Eigen::VectorXd::Constant(1, spec);
  return fit;
}

const PrevalenceVector kPsi(0.9, 0.06, 0.03, 0.01);

}  // namespace

TEST_CASE("P(FIT+) examples") {
  CHECK(fitPositiveProbability(oneCutoff(0.5, 0.5, 0.5, 1.0), 0, PrevalenceVector(1, 0, 0, 0)) == 0.0);
  CHECK(fitPositiveProbability(oneCutoff(0, 0, 1, 0.5), 0, PrevalenceVector(0, 0, 0, 1)) == 1.0);
  const auto fit = oneCutoff(0.3, 0.6, 0.8, 0.95);
  CHECK(fitPositiveProbability(fit, 0, kPsi) ==
        doctest::Approx(0.9 * 0.05 + 0.06 * 0.3 + 0.03 * 0.6 + 0.01 * 0.8).epsilon(1e-15));
  CHECK(fitPositiveProbability(fit, "x", kPsi) == fitPositiveProbability(fit, 0, kPsi));
}

TEST_CASE("posteriors") {
  CHECK(posteriorBowelGivenPositive(oneCutoff(0.2, 0.2, 0.7, 0.9), 0, PrevalenceVector(0, 0, 0, 1), BowelState::Crc) ==
        1.0);
  // Equal σψ for benign and large with nothing else positive.
  const auto sym = posteriorGivenPositive(oneCutoff(0.4, 0.4, 0.4, 1.0), 0, PrevalenceVector(0, 0.5, 0.5, 0));
  CHECK(sym[1] == doctest::Approx(0.5));
  CHECK(sym[2] == doctest::Approx(0.5));

  const auto fit = oneCutoff(0.3, 0.6, 0.8, 0.95);
  const double positive = 0.9 * 0.05 + 0.06 * 0.3 + 0.03 * 0.6 + 0.01 * 0.8;
  const auto post = posteriorGivenPositive(fit, 0, kPsi);
  CHECK(post[0] == doctest::Approx(0.9 * 0.05 / positive).epsilon(1e-14));
  CHECK(post[1] == doctest::Approx(0.06 * 0.3 / positive).epsilon(1e-14));
  CHECK(post[2] == doctest::Approx(0.03 * 0.6 / positive).epsilon(1e-14));
  CHECK(post[3] == doctest::Approx(0.01 * 0.8 / positive).epsilon(1e-14));
  CHECK(post.sum() == doctest::Approx(1.0).epsilon(1e-15));

  CHECK_THROWS_AS(posteriorGivenPositive(oneCutoff(0.5, 0.5, 0.5, 1.0), 0, PrevalenceVector(1, 0, 0, 0)), DomainError);
}

TEST_CASE("colonoscopy result rows") {
  const auto fit = oneCutoff(0.3, 0.6, 0.8, 0.95);
  const auto post = posteriorGivenPositive(fit, 0, kPsi);
  ColonoscopyCharacteristics perfect;
  perfect.sensitivity = {1, 1, 1};
  auto row = colonoscopyResultRow(fit, perfect, 0, kPsi);
  CHECK(row[0] == 0.0);
  for (int i = 0; i < 4; ++i) CHECK(row[i + 1] == doctest::Approx(post[i]).epsilon(1e-14));

  ColonoscopyCharacteristics blind;
  row = colonoscopyResultRow(fit, blind, 0, kPsi);
  CHECK(row[kResultNormal] == 1.0);

  ColonoscopyCharacteristics mixed;
  mixed.sensitivity = {0.8, 0.9, 0.95};
  row = colonoscopyResultRow(fit, mixed, 0, kPsi);
  CHECK(row[kResultBenign] == doctest::Approx(0.8 * post[1]).epsilon(1e-14));
  CHECK(row[kResultLarge] == doctest::Approx(0.9 * post[2]).epsilon(1e-14));
  CHECK(row[kResultCrc] == doctest::Approx(0.95 * post[3]).epsilon(1e-14));
  CHECK(row.sum() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("segment diagram structure") {
  const auto p = syntheticDefaults();
  const auto d = buildSegmentDiagram({Sex::Female, 1}, p, p.prevalence0(Sex::Female));
  CHECK(validateDiagram(d).empty());

  std::uint64_t product = 1;
  for (NodeId id : d.pathNodes()) product *= d.node(id).states.size();
  CHECK(pathCount(d) == product);
  CHECK(product == 5ull * 2 * 2 * 2 * 3 * 2 * 2 * 5 * 3 * 3);

  std::uint64_t strategies = 1;
  for (NodeId id : d.decisionNodes()) {
    for (std::size_t i = 0; i < d.informationStateCount(id); ++i) strategies *= d.node(id).states.size();
  }
  CHECK(StrategySpace(d).count() == strategies);
  CHECK(d.informationSet(node::kExam).predecessors == std::vector<NodeId>{node::kFitResult, node::kContact});
  CHECK(segmentStrategySpace(d, p).count() == 1280);

  auto fixed = p;
  fixed.options.fixExamToColonoscopy = true;
  CHECK(segmentStrategySpace(d, fixed).count() == 20);
  fixed.options.incentiveEnabled = false;
  CHECK(segmentStrategySpace(d, fixed).count() == 10);
}

TEST_CASE("stage-4 incentive row") {
  auto p = syntheticDefaults();
  p.participation.female.returnRate[0] = 0.6;
  p.participation.female.sampleOk[0] = 1.0;
  const auto d = buildSegmentDiagram({Sex::Female, 1}, p, p.prevalence0(Sex::Female));
  const auto& t = d.cpt(node::kSample);
  // Row (incentive = yes, invite = yes).
  CHECK(t(2 * kYes + kYes, kNo) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(t(2 * kYes + kYes, kYes) == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(t(2 * kNo + kYes, kYes) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(t(2 * kYes + kNo, kYes) == 0.0);
}

TEST_CASE("no invitation gives zero objectives") {
  const auto p = syntheticDefaults();
  for (Sex sex : kSexes) {
    const auto d = buildSegmentDiagram({sex, 1}, p, p.prevalence0(sex));
    const auto space = segmentStrategySpace(d, p);
    for (std::uint64_t i = 0; i < space.count(); i += 7) {
      const auto z = space.decode(i);
      if (rootChoice(z, node::kInvite) == kYes) continue;
      const auto v = expectedValues(d, z).values;
      for (Eigen::Index j = 0; j < v.size(); ++j) CHECK(v[j] == 0.0);
    }
  }
}

TEST_CASE("stage-8 rows match the direct formula") {
  Rng rng(5);
  for (int t = 0; t < 100; ++t) {
    const auto p = randomParameters(rng, t % 2 == 0);
    const auto psi = randomPrevalence(rng, 0.2);
    const Sex sex = t % 3 ? Sex::Female : Sex::Male;
    const auto d = buildSegmentDiagram({sex, 1 + t % p.periods()}, p, psi);
    CHECK(validateDiagram(d).empty());
    const auto labels = p.cutoffLabels(sex);
    for (std::size_t l = 0; l < labels.size(); ++l) {
      const auto expected = oracleColonoscopyRow(p, p.fit.cutoffIndex(labels[l]), psi);
      const auto row = d.cpt(node::kExamResult).row(static_cast<Eigen::Index>(4 * l + 2 * kYes + kExamColonoscopy));
      for (int c = 0; c < 5; ++c) REQUIRE(std::abs(row[c] - expected[c]) <= 1e-12);
    }
  }
}

TEST_CASE("invalid inputs are rejected") {
  auto p = syntheticDefaults();
  CHECK_THROWS_AS(buildSegmentDiagram({Sex::Female, 1}, p, PrevalenceVector(0.5, 0.5, 0.5, 0)), ValidationError);
  CHECK_THROWS_AS(buildSegmentDiagram({Sex::Female, 9}, p, p.prevalence0(Sex::Female)), ValidationError);
  p.costs.colonoscopy = -1;
  CHECK_THROWS_AS(buildSegmentDiagram({Sex::Female, 1}, p, p.prevalence0(Sex::Female)), ValidationError);
}

TEST_CASE("strategy description") {
  const auto p = syntheticDefaults();
  const auto d = buildSegmentDiagram({Sex::Male, 1}, p, p.prevalence0(Sex::Male));
  const auto space = segmentStrategySpace(d, p);
  const auto z = space.decode(space.count() - 1);
  CHECK(describeStrategy(d, z) == "cutoff=50 incentive=yes invite=yes exam=yes");
}
