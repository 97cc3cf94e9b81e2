// screenopt: validate parameter files, solve single segments, run the
// two-phase screening pipeline and print unscreened baselines.
//
// Exit codes: 0 success, 1 validation or usage error, 2 infeasible budget or
// capacity limit, 3 oracle mismatch.

#include "screenopt/diagram_json.hpp"
#include "screenopt/errors.hpp"
#include "screenopt/parameters.hpp"
#include "screenopt/pareto.hpp"
#include "screenopt/phase1.hpp"
#include "screenopt/report.hpp"
#include "screenopt/screening_model.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace screenopt;
using namespace screenopt::screening;

namespace {

struct Config {
  std::string params;
  std::string out;
  std::vector<std::string> mask;
  bool fixExam = false;
  bool noIncentive = false;
  bool crossCheck = false;
  int periods = 0;
  std::size_t historyCap = 1'000'000;
  std::string sex = "F";
  int period = 1;
  std::vector<double> budgets{8000, 12000, 16000, 20000};
};

struct Loaded {
  ParameterBundle bundle;
  ParameterReport report;
  std::string hash;
};

std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Loaded load(const Config& c) {
  Loaded l;
  if (c.params.empty()) {
    l.bundle = syntheticDefaults();
    l.hash = inputHash(parametersToJson(l.bundle));
    l.report.defaultsUsed.push_back("(all fields: no parameter file given)");
  } else {
    const std::string text = readFile(c.params);
    auto loaded = loadParameters(text);
    l.bundle = std::move(loaded.bundle);
    l.report = std::move(loaded.report);
    l.hash = inputHash(text);
  }
  if (c.fixExam) l.bundle.options.fixExamToColonoscopy = true;
  if (c.noIncentive) l.bundle.options.incentiveEnabled = false;
  return l;
}

std::vector<std::size_t> maskOrdinals(const std::vector<std::string>& names) {
  std::vector<std::size_t> out;
  for (const auto& n : names) {
    auto it = std::find(kObjectiveNames.begin(), kObjectiveNames.end(), n);
    if (it == kObjectiveNames.end()) {
      throw ValidationError({"--objective-mask: unknown objective '" + n +
                             "' (expected cost, colonoscopies, benign, large, crc)"});
    }
    const auto i = static_cast<std::size_t>(it - kObjectiveNames.begin());
    if (std::find(out.begin(), out.end(), i) == out.end()) out.push_back(i);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> maskNames(const std::vector<std::size_t>& mask) {
  std::vector<std::string> out;
  if (mask.empty()) return {kObjectiveNames.begin(), kObjectiveNames.end()};
  for (auto i : mask) out.push_back(kObjectiveNames[i]);
  return out;
}

int periodsOf(const Config& c, const ParameterBundle& b) {
  if (c.periods < 0 || c.periods > b.periods()) {
    throw ValidationError({"--periods: must be between 1 and " + std::to_string(b.periods())});
  }
  return c.periods > 0 ? c.periods : b.periods();
}

void writeFile(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << content;
}

void emit(const Config& c, const std::string& name, const std::string& content) {
  if (c.out.empty()) {
    std::cout << content;
    return;
  }
  fs::create_directories(c.out);
  writeFile(fs::path(c.out) / name, content);
  std::cerr << "wrote " << (fs::path(c.out) / name).string() << "\n";
}

PrevalenceVector prevalenceAt(const ParameterBundle& b, Sex sex, int period) {
  if (period == 1) return b.prevalence0(sex);
  return naturalProgressionRollout(b.prevalence0(sex), b.transitions.of(sex), period - 1).back();
}

Sex parseSex(const std::string& s) {
  if (s == "F") return Sex::Female;
  if (s == "M") return Sex::Male;
  throw ValidationError({"--sex: expected F or M"});
}

int cmdValidate(const Config& c) {
  const auto l = load(c);
  int problems = 0;
  for (Sex sex : kSexes) {
    for (int k = 1; k <= l.bundle.periods(); ++k) {
      const auto d = buildSegmentDiagram({sex, k}, l.bundle, prevalenceAt(l.bundle, sex, k));
      for (const auto& v : validateDiagram(d)) {
        std::cout << "segment " << code(sex) << " period " << k << ": node " << v.node << " " << v.rule << ": "
                  << v.message << "\n";
        ++problems;
      }
    }
  }
  std::cout << "parameters: " << (c.params.empty() ? "(built-in synthetic defaults)" : c.params) << "\n";
  std::cout << "input hash: " << l.hash << "\n";
  std::cout << "periods: " << l.bundle.periods() << "\n";
  for (const auto& d : l.report.defaultsUsed) std::cout << "default: " << d << "\n";
  for (const auto& w : l.report.warnings) std::cout << "warning: " << w << "\n";
  if (problems) return 1;
  std::cout << "ok\n";
  return 0;
}

int cmdSegment(const Config& c) {
  const auto l = load(c);
  const Sex sex = parseSex(c.sex);
  if (c.period < 1 || c.period > l.bundle.periods()) {
    throw ValidationError({"--period: must be between 1 and " + std::to_string(l.bundle.periods())});
  }
  const auto psi = prevalenceAt(l.bundle, sex, c.period);
  const auto d = buildSegmentDiagram({sex, c.period}, l.bundle, psi);
  MultiObjectiveProblem problem(d, segmentStrategySpace(d, l.bundle), maskOrdinals(c.mask));
  const Eigen::MatrixXd table = evaluateStrategies(d, problem.space);
  const auto frontier = computeFrontier(problem, table);
  if (c.crossCheck) {
    const auto brute = bruteForceFrontier(problem, table);
    if (!sameFrontier(frontier, brute)) {
      throw OracleMismatchError("frontier has " + std::to_string(frontier.points.size()) +
                                " points, brute-force filter has " + std::to_string(brute.points.size()));
    }
    std::cerr << "cross-check: " << brute.points.size() << " points agree\n";
  }
  emit(c, std::string("segment_") + code(sex) + "_" + std::to_string(c.period) + ".csv",
       headerComment(l.hash) + frontierToCsv(d, frontier));
  std::cerr << "segment " << code(sex) << " period " << c.period << ": " << problem.space.count()
            << " strategies, " << frontier.points.size() << " nondominated, " << frontier.solves
            << " scalarized solves\n";
  return 0;
}

int cmdPipeline(const Config& c) {
  const auto l = load(c);
  std::vector<double> budgets = c.budgets;
  for (double b : budgets) {
    if (!(b > 0.0)) throw ValidationError({"--budgets: budgets must be positive"});
  }
  if (!std::is_sorted(budgets.begin(), budgets.end())) {
    throw ValidationError({"--budgets: budgets must be ascending"});
  }
  PipelineConfig pc;
  pc.budgets = budgets;
  pc.periods = periodsOf(c, l.bundle);
  pc.objectiveMask = maskOrdinals(c.mask);
  pc.crossCheck = c.crossCheck;
  pc.historyCap = c.historyCap;
  const auto r = runPipeline(l.bundle, pc);

  Config out = c;
  if (out.out.empty()) out.out = "screenopt-out";
  emit(out, "policy.csv", policyTableCsv(l.bundle, r, l.hash));
  emit(out, "histories_F.csv", historiesCsv(l.bundle, r.female, l.hash));
  emit(out, "histories_M.csv", historiesCsv(l.bundle, r.male, l.hash));
  emit(out, "prevalence_series.csv", prevalenceSeriesCsv(l.bundle, r, l.hash));
  ManifestInfo m;
  m.command = "pipeline";
  m.hash = l.hash;
  m.budgets = budgets;
  m.phase1Budget = r.phase1Budget;
  m.periods = r.periods;
  m.objectiveMask = maskNames(pc.objectiveMask);
  m.fixExam = l.bundle.options.fixExamToColonoscopy;
  m.incentiveEnabled = l.bundle.options.incentiveEnabled;
  m.crossCheck = c.crossCheck;
  m.outputs = {"policy.csv", "histories_F.csv", "histories_M.csv", "prevalence_series.csv"};
  emit(out, "manifest.json", manifestJson(m));

  std::cerr << "histories: F " << r.female.histories.size() << ", M " << r.male.histories.size() << "\n";
  bool infeasible = false;
  for (const auto& s : r.cases) {
    std::cerr << "budget " << formatDouble(s.budget) << ": psi_R " << formatDouble(s.psiR) << ", colonoscopies "
              << formatDouble(s.totalColonoscopies) << (s.feasible ? "" : " (infeasible)") << "\n";
    infeasible = infeasible || !s.feasible;
  }
  return infeasible ? 2 : 0;
}

int cmdBaseline(const Config& c) {
  const auto l = load(c);
  emit(c, "baseline.csv", baselineCsv(l.bundle, periodsOf(c, l.bundle), l.hash));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pareto-optimal multi-period colorectal-cancer screening strategies"};
  app.set_version_flag("--version", toolVersion());
  app.require_subcommand(1);
  app.fallthrough();

  Config c;
  app.add_option("--params", c.params, "Parameter file (JSON); built-in synthetic values when omitted")
      ->check(CLI::ExistingFile);
  app.add_option("--out", c.out, "Output directory");
  app.add_option("--objective-mask", c.mask, "Objectives in the segment frontier (cost,colonoscopies,benign,large,crc)")
      ->delimiter(',');
  app.add_flag("--fix-exam", c.fixExam, "Always order a colonoscopy after a positive FIT and contact");
  app.add_flag("--no-incentive", c.noIncentive, "Disable the return incentive");
  app.add_flag("--cross-check", c.crossCheck, "Compare every frontier with the brute-force filter");
  app.add_option("--periods", c.periods, "Number of screening periods (default: all in the parameter file)");
  app.add_option("--history-cap", c.historyCap, "Maximum strategy histories per period");

  auto* validate = app.add_subcommand("validate", "Validate a parameter file and every segment diagram");
  auto* segment = app.add_subcommand("segment", "Nondominated strategies of one (sex, period) segment");
  segment->add_option("--sex", c.sex, "F or M")->check(CLI::IsMember({"F", "M"}));
  segment->add_option("--period", c.period, "Screening period, 1 = age 60");
  auto* pipeline = app.add_subcommand("pipeline", "Phase 1 and the Phase-2 budget sweep");
  pipeline->add_option("--budgets", c.budgets, "Colonoscopy budgets, ascending")->delimiter(',');
  auto* baseline = app.add_subcommand("baseline", "Prevalences without screening");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (validate->parsed()) return cmdValidate(c);
    if (segment->parsed()) return cmdSegment(c);
    if (pipeline->parsed()) return cmdPipeline(c);
    if (baseline->parsed()) return cmdBaseline(c);
  } catch (const ValidationError& e) {
    std::cerr << "validation failed:\n";
    for (const auto& i : e.issues()) std::cerr << "  " << i << "\n";
    return 1;
  } catch (const OracleMismatchError& e) {
    std::cerr << "oracle mismatch: " << e.what() << "\n";
    return 3;
  } catch (const EmptyFrontierError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 2;
  } catch (const CapacityError& e) {
    std::cerr << "capacity: " << e.what() << "\n";
    return 2;
  } catch (const IterationLimitError& e) {
    std::cerr << "capacity: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
