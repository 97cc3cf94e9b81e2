#pragma once

// The per-segment colorectal-cancer screening influence diagram: FIT cut-off,
// incentive and invitation decisions, sample return, FIT result, contact with
// the nurse, examination decision, colonoscopy result, polyp removal and
// adverse events, with cost, colonoscopy and detection value nodes.

#include "screenopt/influence_diagram.hpp"
#include "screenopt/parameters.hpp"

#include <array>
#include <string>

namespace screenopt::screening {

struct Segment {
  Sex sex = Sex::Female;
  int period = 1;
};

namespace node {
inline constexpr NodeId kCutoff = 1;
inline constexpr NodeId kIncentive = 2;
inline constexpr NodeId kInvite = 3;
inline constexpr NodeId kSample = 4;
inline constexpr NodeId kFitResult = 5;
inline constexpr NodeId kContact = 6;
inline constexpr NodeId kExam = 7;
inline constexpr NodeId kExamResult = 8;
inline constexpr NodeId kPolyp = 9;
inline constexpr NodeId kAdverse = 10;
inline constexpr NodeId kCost = 11;
inline constexpr NodeId kColonoscopies = 12;
inline constexpr NodeId kBenignFound = 13;
inline constexpr NodeId kLargeFound = 14;
inline constexpr NodeId kCrcFound = 15;
}  // namespace node

// State ordinals.
inline constexpr int kNo = 0, kYes = 1;
inline constexpr int kFitNa = 0, kFitPositive = 1, kFitNegative = 2;
inline constexpr int kExamNone = 0, kExamColonoscopy = 1;
inline constexpr int kResultNa = 0, kResultNormal = 1, kResultBenign = 2, kResultLarge = 3, kResultCrc = 4;
inline constexpr int kPolypNoResult = 0, kPolypNone = 1, kPolypFound = 2;
inline constexpr int kAdverseNone = 0, kAdverseBleed = 1, kAdversePerforation = 2;

/// Objective names in value-node order.
inline const std::array<std::string, 5> kObjectiveNames = {"cost", "colonoscopies", "benign", "large", "crc"};

/// P(FIT+ | cut-off) = Σ_{b abnormal} σ⁺_{l,b} ψ_b + (1 − σ⁻_l) ψ_N.
double fitPositiveProbability(const FitTestCharacteristics& fit, std::size_t cutoff, const PrevalenceVector& psi);
double fitPositiveProbability(const FitTestCharacteristics& fit, const std::string& cutoff,
                              const PrevalenceVector& psi);

/// Bayes posterior P(b | FIT+, l). Throws DomainError when P(FIT+) = 0.
double posteriorBowelGivenPositive(const FitTestCharacteristics& fit, std::size_t cutoff,
                                   const PrevalenceVector& psi, BowelState b);
/// All four posteriors, ordered N, B, L, R.
Eigen::Vector4d posteriorGivenPositive(const FitTestCharacteristics& fit, std::size_t cutoff,
                                       const PrevalenceVector& psi);

/// Colonoscopy result distribution over {NA, Normal, Benign, Large, CRC} after a
/// positive FIT. Missed abnormal findings are reported as Normal.
Eigen::Matrix<double, 5, 1> colonoscopyResultRow(const FitTestCharacteristics& fit,
                                                 const ColonoscopyCharacteristics& col, std::size_t cutoff,
                                                 const PrevalenceVector& psi);

/// Throws ValidationError if the bundle or ψ is invalid.
InfluenceDiagram buildSegmentDiagram(const Segment& segment, const ParameterBundle& params,
                                     const PrevalenceVector& psi);

/// Admissible strategies under the bundle's options: the incentive is pinned to
/// "no" when disabled, and the examination rule is pinned to "colonoscopy iff
/// contact" when fixed.
StrategySpace segmentStrategySpace(const InfluenceDiagram& d, const ParameterBundle& params);

/// Readable summary of a segment strategy, e.g. "cutoff=25 incentive=yes invite=yes exam=yes".
std::string describeStrategy(const InfluenceDiagram& d, const GlobalStrategy& strategy);

/// The chosen state ordinal of a decision node with an empty information set.
int rootChoice(const GlobalStrategy& strategy, NodeId decision);

/// Whether the examination rule orders a colonoscopy at the only reachable
/// information state where contact was made (FIT positive, contact yes).
bool examinesOnContact(const GlobalStrategy& strategy);

}  // namespace screenopt::screening
