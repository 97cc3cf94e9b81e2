#include "screenopt/screening_model.hpp"

#include "screenopt/diagram_json.hpp"
#include "screenopt/errors.hpp"

#include <cmath>
#include <functional>

namespace screenopt::screening {

double fitPositiveProbability(const FitTestCharacteristics& fit, std::size_t cutoff, const PrevalenceVector& psi) {
  const auto l = static_cast<Eigen::Index>(cutoff);
  double p = (1.0 - fit.specificity[l]) * psi[0];
  for (int g = 0; g < 3; ++g) p += fit.sensitivity(l, g) * psi[g + 1];
  return p;
}

double fitPositiveProbability(const FitTestCharacteristics& fit, const std::string& cutoff,
                              const PrevalenceVector& psi) {
  return fitPositiveProbability(fit, fit.cutoffIndex(cutoff), psi);
}

Eigen::Vector4d posteriorGivenPositive(const FitTestCharacteristics& fit, std::size_t cutoff,
                                       const PrevalenceVector& psi) {
  const auto l = static_cast<Eigen::Index>(cutoff);
  const double positive = fitPositiveProbability(fit, cutoff, psi);
  if (!(positive > 0.0)) {
    throw DomainError("P(FIT+) is zero at cut-off '" + fit.cutoffs[cutoff] + "'; posterior undefined");
  }
  Eigen::Vector4d out;
  out[0] = (1.0 - fit.specificity[l]) * psi[0] / positive;
  for (int g = 0; g < 3; ++g) out[g + 1] = fit.sensitivity(l, g) * psi[g + 1] / positive;
  return out;
}

double posteriorBowelGivenPositive(const FitTestCharacteristics& fit, std::size_t cutoff,
                                   const PrevalenceVector& psi, BowelState b) {
  return posteriorGivenPositive(fit, cutoff, psi)[static_cast<int>(b)];
}

Eigen::Matrix<double, 5, 1> colonoscopyResultRow(const FitTestCharacteristics& fit,
                                                 const ColonoscopyCharacteristics& col, std::size_t cutoff,
                                                 const PrevalenceVector& psi) {
  const Eigen::Vector4d post = posteriorGivenPositive(fit, cutoff, psi);
  Eigen::Matrix<double, 5, 1> row = Eigen::Matrix<double, 5, 1>::Zero();
  double found = 0.0;
  for (int g = 0; g < 3; ++g) {
    row[kResultBenign + g] = col.sensitivity[g] * post[g + 1];
    found += row[kResultBenign + g];
  }
  row[kResultNormal] = 1.0 - found;
  return row;
}

namespace {

/// Calls f(states, index) for every combination in mixed-radix order, last digit fastest.
void tabulate(const std::vector<int>& radices, const std::function<void(const std::vector<int>&, Eigen::Index)>& f) {
  std::vector<int> s(radices.size(), 0);
  Eigen::Index index = 0;
  while (true) {
    f(s, index++);
    std::size_t i = s.size();
    while (i > 0) {
      --i;
      if (++s[i] < radices[i]) break;
      s[i] = 0;
      if (i == 0) return;
    }
    if (s.empty()) return;
  }
}

void requireValid(const ParameterBundle& params, const PrevalenceVector& psi, const Segment& segment) {
  auto issues = validateParameters(params);
  for (int i = 0; i < 4; ++i) {
    if (!std::isfinite(psi[i]) || psi[i] < -1e-12 || psi[i] > 1.0 + 1e-12) {
      issues.push_back("prevalence[" + std::to_string(i) + "]: out of range (" + formatDouble(psi[i]) + ")");
    }
  }
  if (std::abs(psi.sum() - 1.0) > 1e-9) {
    issues.push_back("prevalence: simplex violation, entries sum to " + formatDouble(psi.sum()));
  }
  if (segment.period < 1 || segment.period > params.periods()) {
    issues.push_back("segment.period: " + std::to_string(segment.period) + " outside 1.." +
                     std::to_string(params.periods()));
  }
  if (!issues.empty()) throw ValidationError(issues);
}

}  // namespace

InfluenceDiagram buildSegmentDiagram(const Segment& segment, const ParameterBundle& params,
                                     const PrevalenceVector& psi) {
  requireValid(params, psi, segment);
  const auto labels = params.cutoffLabels(segment.sex);
  std::vector<std::size_t> fitIndex;
  for (const auto& l : labels) fitIndex.push_back(params.fit.cutoffIndex(l));
  const int cutoffs = static_cast<int>(labels.size());
  const double returnOk = params.participation.returnOk(segment.sex, segment.period);
  const double contact = params.participation.contact(segment.sex, segment.period);
  const auto& col = params.colonoscopy;
  const auto& costs = params.costs;

  DiagramBuilder b;
  b.decision(node::kCutoff, "fit_cutoff", labels)
      .decision(node::kIncentive, "incentive", {"no", "yes"})
      .decision(node::kInvite, "invite", {"no", "yes"})
      .chance(node::kSample, "sample_returned", {"no", "yes"})
      .chance(node::kFitResult, "fit_result", {"na", "positive", "negative"})
      .chance(node::kContact, "contact", {"no", "yes"})
      .decision(node::kExam, "examination", {"none", "colonoscopy"})
      .chance(node::kExamResult, "exam_result", {"na", "normal", "benign", "large", "crc"})
      .chance(node::kPolyp, "polyp", {"no_result", "no_polyp", "polyp"})
      .chance(node::kAdverse, "adverse_event", {"none", "bleed", "perforation"})
      .value(node::kCost, "cost", Orientation::Minimize, "euros")
      .value(node::kColonoscopies, "colonoscopies", Orientation::Maximize, "count")
      .value(node::kBenignFound, "benign_found", Orientation::Maximize, "indicator")
      .value(node::kLargeFound, "large_found", Orientation::Maximize, "indicator")
      .value(node::kCrcFound, "crc_found", Orientation::Maximize, "indicator");

  b.arc(node::kIncentive, node::kSample).arc(node::kInvite, node::kSample);
  b.arc(node::kCutoff, node::kFitResult).arc(node::kSample, node::kFitResult);
  b.arc(node::kFitResult, node::kContact);
  b.arc(node::kFitResult, node::kExam).arc(node::kContact, node::kExam);
  b.arc(node::kCutoff, node::kExamResult).arc(node::kContact, node::kExamResult).arc(node::kExam, node::kExamResult);
  b.arc(node::kExamResult, node::kPolyp);
  b.arc(node::kPolyp, node::kAdverse);
  for (NodeId from : {node::kIncentive, node::kInvite, node::kSample, node::kExam, node::kExamResult, node::kPolyp,
                      node::kAdverse}) {
    b.arc(from, node::kCost);
  }
  for (NodeId v : {node::kColonoscopies, node::kBenignFound, node::kLargeFound, node::kCrcFound}) {
    b.arc(node::kExamResult, v);
  }

  // Stage 4: rows (incentive, invite). The incentive halves the probability of not returning.
  Eigen::MatrixXd sample(4, 2);
  sample << 1.0, 0.0,                                              //
      1.0 - returnOk, returnOk,                                    //
      1.0, 0.0,                                                    //
      (1.0 - returnOk) / 2.0, returnOk + (1.0 - returnOk) / 2.0;
  b.cpt(node::kSample, sample);

  // Stage 5: rows (cut-off, sample); columns NA, +, -.
  Eigen::MatrixXd fit(2 * cutoffs, 3);
  for (int l = 0; l < cutoffs; ++l) {
    const double positive = fitPositiveProbability(params.fit, fitIndex[l], psi);
    fit.row(2 * l) << 1.0, 0.0, 0.0;
    fit.row(2 * l + 1) << 0.0, positive, 1.0 - positive;
  }
  b.cpt(node::kFitResult, fit);

  // Stage 6: rows FIT result.
  Eigen::MatrixXd reach(3, 2);
  reach << 1.0, 0.0, 1.0 - contact, contact, 1.0, 0.0;
  b.cpt(node::kContact, reach);

  // Stage 8: rows (cut-off, contact, examination).
  Eigen::MatrixXd result = Eigen::MatrixXd::Zero(4 * cutoffs, 5);
  for (int l = 0; l < cutoffs; ++l) {
    for (int r = 0; r < 4; ++r) result(4 * l + r, kResultNa) = 1.0;
    const int examined = 4 * l + 2 * kYes + kExamColonoscopy;
    if (fitPositiveProbability(params.fit, fitIndex[l], psi) > 0.0) {
      result.row(examined) = colonoscopyResultRow(params.fit, col, fitIndex[l], psi).transpose();
    } else {
      result.row(examined).setZero();
      result(examined, kResultNormal) = 1.0;
    }
  }
  b.cpt(node::kExamResult, result);

  // Stage 9: any growth found means a polyp is removed.
  Eigen::MatrixXd polyp(5, 3);
  polyp << 1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 1, 0, 0, 1;
  b.cpt(node::kPolyp, polyp);

  // Stage 10: adverse events of the colonoscopy.
  Eigen::MatrixXd adverse(3, 3);
  adverse << 1.0, 0.0, 0.0,                                                                       //
      1.0 - col.bleed - col.perforationWithoutPolypectomy, col.bleed, col.perforationWithoutPolypectomy,  //
      1.0 - col.bleed - col.perforationWithPolypectomy, col.bleed, col.perforationWithPolypectomy;
  b.cpt(node::kAdverse, adverse);

  // Cost over (incentive, invite, sample, examination, result, polyp, adverse).
  Eigen::VectorXd cost(2 * 2 * 2 * 2 * 5 * 3 * 3);
  tabulate({2, 2, 2, 2, 5, 3, 3}, [&](const std::vector<int>& s, Eigen::Index i) {
    const int incentive = s[0], invite = s[1], returned = s[2], result = s[4], polyp = s[5], event = s[6];
    double c = 0.0;
    if (invite == kYes) c += costs.invitation;
    if (invite == kYes && incentive == kYes) c += costs.incentive;
    if (returned == kYes) c += costs.sampleAnalysis;
    if (result != kResultNa) c += costs.colonoscopy;
    if (result >= kResultBenign) c += costs.pathology[result - kResultBenign];
    if (polyp == kPolypFound) c += costs.polypectomy;
    if (event == kAdverseBleed) c += costs.bleed;
    if (event == kAdversePerforation) c += costs.perforation;
    cost[i] = c;
  });
  b.utilities(node::kCost, cost);

  Eigen::VectorXd performed(5), benign = Eigen::VectorXd::Zero(5), large = Eigen::VectorXd::Zero(5),
                                crc = Eigen::VectorXd::Zero(5);
  performed << 0, -1, -1, -1, -1;
  benign[kResultBenign] = 1;
  large[kResultLarge] = 1;
  crc[kResultCrc] = 1;
  b.utilities(node::kColonoscopies, performed)
      .utilities(node::kBenignFound, benign)
      .utilities(node::kLargeFound, large)
      .utilities(node::kCrcFound, crc);
  return b.build();
}

StrategySpace segmentStrategySpace(const InfluenceDiagram& d, const ParameterBundle& params) {
  StrategySpace space(d);
  if (!params.options.incentiveEnabled) space.restrictAll(node::kIncentive, {kNo});
  if (params.options.fixExamToColonoscopy) {
    for (std::size_t info = 0; info < d.informationStateCount(node::kExam); ++info) {
      const auto states = d.informationState(node::kExam, info);
      space.restrict(node::kExam, info, {states[1] == kYes ? kExamColonoscopy : kExamNone});
    }
  }
  return space;
}

int rootChoice(const GlobalStrategy& strategy, NodeId decision) {
  const auto* local = strategy.find(decision);
  if (!local || local->rule.size() != 1) {
    throw std::invalid_argument("decision " + std::to_string(decision) + " has no single root choice");
  }
  return local->rule[0];
}

bool examinesOnContact(const GlobalStrategy& strategy) {
  const auto* local = strategy.find(node::kExam);
  if (!local) throw std::invalid_argument("strategy has no examination rule");
  return local->rule.at(static_cast<std::size_t>(2 * kFitPositive + kYes)) == kExamColonoscopy;
}

std::string describeStrategy(const InfluenceDiagram& d, const GlobalStrategy& strategy) {
  const auto yesNo = [](int s) { return s == kYes ? "yes" : "no"; };
  return "cutoff=" + d.node(node::kCutoff).states[rootChoice(strategy, node::kCutoff)] +
         " incentive=" + yesNo(rootChoice(strategy, node::kIncentive)) +
         " invite=" + yesNo(rootChoice(strategy, node::kInvite)) +
         " exam=" + (examinesOnContact(strategy) ? "yes" : "no");
}

}  // namespace screenopt::screening
