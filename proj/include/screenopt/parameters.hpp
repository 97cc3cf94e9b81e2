#pragma once

// Parameter bundle for the colorectal-cancer screening model and its JSON
// loader. Every field is optional in the file; missing fields fall back to a
// synthetic default set and are listed in the load report.

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace screenopt::screening {

enum class Sex { Female, Male };
inline constexpr Sex kSexes[] = {Sex::Female, Sex::Male};

/// "F" or "M".
const char* code(Sex sex);

enum class BowelState { Normal = 0, Benign = 1, Large = 2, Crc = 3 };

/// Fractions over {Normal, Benign, Large, CRC}.
using PrevalenceVector = Eigen::Vector4d;

/// Period 1 is age 60; periods are two years apart.
inline int ageOf(int period) { return 60 + 2 * (period - 1); }

struct FitTestCharacteristics {
  std::string unit = "ug/g";
  std::vector<std::string> cutoffs;
  Eigen::MatrixX3d sensitivity;  // rows: cut-offs; columns: benign, large, CRC
  Eigen::VectorXd specificity;   // per cut-off, for the Normal state

  /// Throws std::invalid_argument for an unknown label.
  std::size_t cutoffIndex(const std::string& label) const;
};

/// Specificity is perfect by construction.
struct ColonoscopyCharacteristics {
  Eigen::Vector3d sensitivity{0, 0, 0};  // benign, large, CRC
  double bleed = 0.0;
  double perforationWithPolypectomy = 0.0;
  double perforationWithoutPolypectomy = 0.0;
};

struct SexParticipation {
  Eigen::VectorXd returnRate;  // per period
  Eigen::VectorXd sampleOk;
  Eigen::VectorXd contact;  // contacting the nurse after a positive FIT
};

struct ParticipationParameters {
  SexParticipation female, male;

  const SexParticipation& of(Sex sex) const { return sex == Sex::Female ? female : male; }
  /// P(return | sex, age) * P(sample OK).
  double returnOk(Sex sex, int period) const;
  double contact(Sex sex, int period) const;
};

/// Euros per screening event. Charges apply only on paths where the event happens.
struct CostSchedule {
  double invitation = 0.0;      // stage 3, invite = yes
  double incentive = 50.0;      // stage 2, incentive = yes on an invited path
  double sampleAnalysis = 0.0;  // stage 4, usable sample returned
  double colonoscopy = 0.0;     // stage 7, examination performed
  Eigen::Vector3d pathology{0, 0, 0};  // stage 8, benign / large / CRC finding
  double polypectomy = 0.0;     // stage 9
  double bleed = 0.0;           // stage 10
  double perforation = 0.0;     // stage 10
};

struct TransitionRow {
  double normalBenign = 0.0;
  double benignLarge = 0.0;
  double largeCrc = 0.0;
};

struct TransitionModel {
  std::vector<TransitionRow> female, male;  // per period, applied after that period's screening

  const std::vector<TransitionRow>& of(Sex sex) const { return sex == Sex::Female ? female : male; }
  const TransitionRow& at(Sex sex, int period) const { return of(sex).at(static_cast<std::size_t>(period - 1)); }
};

struct Population {
  Eigen::VectorXd female, male;  // cohort size per period

  const Eigen::VectorXd& of(Sex sex) const { return sex == Sex::Female ? female : male; }
  double cohort(Sex sex, int period) const { return of(sex)[period - 1]; }
  /// Sum of the first `periods` cohorts.
  double total(Sex sex, int periods) const { return of(sex).head(periods).sum(); }
};

struct ModelOptions {
  bool fixExamToColonoscopy = false;
  bool incentiveEnabled = true;
  std::vector<std::string> cutoffSetFemale, cutoffSetMale;  // empty: every FIT cut-off

  const std::vector<std::string>& cutoffSet(Sex sex) const {
    return sex == Sex::Female ? cutoffSetFemale : cutoffSetMale;
  }
};

struct ParameterBundle {
  std::string description;
  FitTestCharacteristics fit;
  ColonoscopyCharacteristics colonoscopy;
  ParticipationParameters participation;
  CostSchedule costs;
  PrevalenceVector prevalenceFemale = PrevalenceVector::UnitX();
  PrevalenceVector prevalenceMale = PrevalenceVector::UnitX();
  TransitionModel transitions;
  Population population;
  ModelOptions options;

  const PrevalenceVector& prevalence0(Sex sex) const {
    return sex == Sex::Female ? prevalenceFemale : prevalenceMale;
  }
  /// Number of screening periods covered by the per-period arrays.
  int periods() const { return static_cast<int>(participation.female.returnRate.size()); }
  /// Decision-node-1 labels for a sex (the option set, or every cut-off).
  std::vector<std::string> cutoffLabels(Sex sex) const;
};

struct ParameterReport {
  std::vector<std::string> defaultsUsed;  // field paths that took the synthetic default
  std::vector<std::string> warnings;
};

struct LoadedParameters {
  ParameterBundle bundle;
  ParameterReport report;
};

/// Clearly synthetic, Finnish-programme-shaped values (five periods, ages 60-68).
ParameterBundle syntheticDefaults();

/// Strict loader: unknown keys, out-of-range probabilities, simplex and shape
/// violations raise ValidationError listing every offending field path.
LoadedParameters loadParameters(const std::string& jsonText);
LoadedParameters loadParametersFile(const std::string& path);

/// Validation issues for an in-memory bundle; empty when valid.
std::vector<std::string> validateParameters(const ParameterBundle& bundle);
/// Warn-only checks (e.g. sensitivities not decreasing with the cut-off).
std::vector<std::string> parameterWarnings(const ParameterBundle& bundle);

/// Canonical JSON; loadParameters(parametersToJson(b)) reproduces b.
std::string parametersToJson(const ParameterBundle& bundle);

}  // namespace screenopt::screening
