#pragma once

// Full two-phase pipeline and its deterministic CSV / JSON exports.

#include "screenopt/phase1.hpp"
#include "screenopt/phase2.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace screenopt::screening {

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);
/// "fnv1a64:" followed by 16 hex digits.
std::string inputHash(std::string_view bytes);

const char* toolVersion();
/// "# screenopt <version> input <hash>\n".
std::string headerComment(const std::string& hash);

struct PipelineConfig {
  std::vector<double> budgets{8000, 12000, 16000, 20000};
  int periods = 0;  // 0: every period in the bundle
  std::vector<std::size_t> objectiveMask;
  bool crossCheck = false;
  FrontierOptions frontier;
  std::size_t historyCap = 1'000'000;
};

struct PipelineResult {
  int periods = 0;
  double phase1Budget = 0.0;  // the largest budget; histories are shared by the sweep
  Phase1Result female, male;
  SelectionProblem selection;
  std::vector<SelectionResult> cases;
};

/// Phase 1 once per sex at the largest budget, then the Phase-2 sweep over
/// those candidates. Throws EmptyFrontierError when no history fits.
PipelineResult runPipeline(const ParameterBundle& params, const PipelineConfig& config);

/// Policy cell: cut-off label, "+i" with the incentive, ":noexam" when a
/// positive contact gets no colonoscopy, "-" without an invitation.
std::string policyCell(const ParameterBundle& params, Sex sex, const PeriodRecord& record);

std::string policyTableCsv(const ParameterBundle& params, const PipelineResult& result, const std::string& hash);
std::string historiesCsv(const ParameterBundle& params, const Phase1Result& phase1, const std::string& hash);
/// Per-period prevalences of each case's chosen histories and of the unscreened baseline.
std::string prevalenceSeriesCsv(const ParameterBundle& params, const PipelineResult& result,
                                const std::string& hash);
std::string baselineCsv(const ParameterBundle& params, int periods, const std::string& hash);

struct ManifestInfo {
  std::string command;
  std::string hash;
  std::vector<double> budgets;
  double phase1Budget = 0.0;
  int periods = 0;
  std::vector<std::string> objectiveMask;
  bool fixExam = false;
  bool incentiveEnabled = true;
  bool crossCheck = false;
  std::vector<std::string> outputs;
};
std::string manifestJson(const ManifestInfo& info);

}  // namespace screenopt::screening
