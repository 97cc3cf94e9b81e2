#include "screenopt/report.hpp"

#include "screenopt/csv.hpp"
#include "screenopt/diagram_json.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>

#ifndef SCREENOPT_VERSION
#define SCREENOPT_VERSION "0.0.0"
#endif

namespace screenopt::screening {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string inputHash(std::string_view bytes) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
  return std::string("fnv1a64:") + buf;
}

const char* toolVersion() { return SCREENOPT_VERSION; }

std::string headerComment(const std::string& hash) {
  return std::string("# screenopt ") + toolVersion() + " input " + hash + "\n";
}

PipelineResult runPipeline(const ParameterBundle& params, const PipelineConfig& config) {
  if (config.budgets.empty()) throw std::invalid_argument("at least one budget is required");
  PipelineResult out;
  out.periods = config.periods > 0 ? config.periods : params.periods();
  out.phase1Budget = *std::max_element(config.budgets.begin(), config.budgets.end());

  Phase1Options o;
  o.budget = out.phase1Budget;
  o.periods = out.periods;
  o.objectiveMask = config.objectiveMask;
  o.frontier = config.frontier;
  o.historyCap = config.historyCap;
  o.crossCheck = config.crossCheck;
  out.female = runPhase1(params, Sex::Female, o);
  out.male = runPhase1(params, Sex::Male, o);

  out.selection.populationFemale = params.population.total(Sex::Female, out.periods);
  out.selection.populationMale = params.population.total(Sex::Male, out.periods);
  out.selection.female = candidatesOf(out.female, out.selection.populationFemale);
  out.selection.male = candidatesOf(out.male, out.selection.populationMale);
  out.cases = budgetSweep(out.selection, config.budgets);
  return out;
}

std::string policyCell(const ParameterBundle& params, Sex sex, const PeriodRecord& record) {
  if (rootChoice(record.strategy, node::kInvite) != kYes) return "-";
  std::string cell = params.cutoffLabels(sex).at(static_cast<std::size_t>(rootChoice(record.strategy, node::kCutoff)));
  if (rootChoice(record.strategy, node::kIncentive) == kYes) cell += "+i";
  if (!examinesOnContact(record.strategy)) cell += ":noexam";
  return cell;
}

namespace {

std::string keyOf(const StrategyHistory& h) {
  std::string s;
  for (auto k : h.key()) s += (s.empty() ? "" : ";") + std::to_string(k);
  return s;
}

std::string num(double v) { return formatDouble(v); }

}  // namespace

std::string policyTableCsv(const ParameterBundle& params, const PipelineResult& r, const std::string& hash) {
  std::string out = headerComment(hash);
  out += "case,budget,feasible";
  for (Sex sex : kSexes) {
    for (int k = 1; k <= r.periods; ++k) out += std::string(",") + code(sex) + "_age" + std::to_string(ageOf(k));
  }
  out += ",psi_R,total_colonoscopies,total_cost,female_history,male_history,female_key,male_key\n";
  for (std::size_t c = 0; c < r.cases.size(); ++c) {
    const auto& s = r.cases[c];
    const auto& hf = r.female.histories[s.female];
    const auto& hm = r.male.histories[s.male];
    out += std::to_string(c + 1) + "," + num(s.budget) + "," + (s.feasible ? "true" : "false");
    for (const auto& p : hf.periods) out += "," + csvField(policyCell(params, Sex::Female, p));
    for (const auto& p : hm.periods) out += "," + csvField(policyCell(params, Sex::Male, p));
    out += "," + num(s.psiR) + "," + num(s.totalColonoscopies) + "," + num(s.totalCost) + "," +
           std::to_string(s.female) + "," + std::to_string(s.male) + "," + keyOf(hf) + "," + keyOf(hm) + "\n";
  }
  return out;
}

std::string historiesCsv(const ParameterBundle& params, const Phase1Result& phase1, const std::string& hash) {
  const Sex sex = phase1.sex;
  const int periods = phase1.histories.empty() ? 0 : static_cast<int>(phase1.histories.front().periods.size());
  std::string out = headerComment(hash);
  out += "history,key";
  for (int k = 1; k <= periods; ++k) {
    const std::string p = ",p" + std::to_string(k) + "_";
    out += p + "cutoff" + p + "incentive" + p + "invite" + p + "exam" + p + "policy" + p + "normal" + p + "benign" +
           p + "large" + p + "crc" + p + "colonoscopies" + p + "cost";
  }
  out += ",cumulative_colonoscopies,total_crc_prevalence,total_cost\n";
  const auto labels = params.cutoffLabels(sex);
  const auto yesNo = [](int s) { return s == kYes ? "yes" : "no"; };
  for (std::size_t i = 0; i < phase1.histories.size(); ++i) {
    const auto& h = phase1.histories[i];
    out += std::to_string(i) + "," + keyOf(h);
    for (const auto& p : h.periods) {
      out += "," + csvField(labels.at(static_cast<std::size_t>(rootChoice(p.strategy, node::kCutoff))));
      out += std::string(",") + yesNo(rootChoice(p.strategy, node::kIncentive));
      out += std::string(",") + yesNo(rootChoice(p.strategy, node::kInvite));
      out += std::string(",") + (examinesOnContact(p.strategy) ? "colonoscopy" : "none");
      out += "," + csvField(policyCell(params, sex, p));
      for (int b = 0; b < 4; ++b) out += "," + num(p.post[b]);
      out += "," + num(p.colonoscopies) + "," + num(p.cost);
    }
    out += "," + num(h.cumulativeColonoscopies) + "," + num(h.totalPrevalence[3]) + "," + num(h.cumulativeCost) +
           "\n";
  }
  return out;
}

namespace {

const char* kSeriesHeader = "series,sex,period,age,normal,benign,large,crc,total_crc\n";

std::string seriesRows(const std::string& name, Sex sex, const ParameterBundle& params,
                       const std::vector<PrevalenceVector>& post) {
  std::string out;
  double weighted = 0.0, people = 0.0;
  for (std::size_t i = 0; i < post.size(); ++i) {
    const int k = static_cast<int>(i) + 1;
    const double n = params.population.cohort(sex, k);
    weighted += n * post[i][3];
    people += n;
    out += name + "," + code(sex) + "," + std::to_string(k) + "," + std::to_string(ageOf(k));
    for (int b = 0; b < 4; ++b) out += "," + num(post[i][b]);
    out += "," + num(weighted / people) + "\n";
  }
  return out;
}

}  // namespace

std::string baselineCsv(const ParameterBundle& params, int periods, const std::string& hash) {
  std::string out = headerComment(hash) + kSeriesHeader;
  for (Sex sex : kSexes) {
    out += seriesRows("baseline", sex, params,
                      naturalProgressionRollout(params.prevalence0(sex), params.transitions.of(sex), periods));
  }
  return out;
}

std::string prevalenceSeriesCsv(const ParameterBundle& params, const PipelineResult& r, const std::string& hash) {
  std::string out = headerComment(hash) + kSeriesHeader;
  for (Sex sex : kSexes) {
    out += seriesRows("baseline", sex, params,
                      naturalProgressionRollout(params.prevalence0(sex), params.transitions.of(sex), r.periods));
  }
  for (std::size_t c = 0; c < r.cases.size(); ++c) {
    for (Sex sex : kSexes) {
      const auto& h = sex == Sex::Female ? r.female.histories[r.cases[c].female] : r.male.histories[r.cases[c].male];
      std::vector<PrevalenceVector> post;
      for (const auto& p : h.periods) post.push_back(p.post);
      out += seriesRows("case" + std::to_string(c + 1), sex, params, post);
    }
  }
  return out;
}

std::string manifestJson(const ManifestInfo& info) {
  nlohmann::ordered_json j;
  j["tool"] = "screenopt";
  j["version"] = toolVersion();
  j["command"] = info.command;
  j["input_hash"] = info.hash;
  j["budgets"] = info.budgets;
  j["phase1_budget"] = info.phase1Budget;
  j["periods"] = info.periods;
  j["objective_mask"] = info.objectiveMask;
  j["options"] = {{"fix_exam_to_colonoscopy", info.fixExam},
                  {"incentive_enabled", info.incentiveEnabled},
                  {"cross_check", info.crossCheck}};
  j["outputs"] = info.outputs;
  return j.dump(2) + "\n";
}

}  // namespace screenopt::screening
