#include "screenopt/parameters.hpp"

#include "screenopt/diagram_json.hpp"
#include "screenopt/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace screenopt::screening {

using nlohmann::json;

const char* code(Sex sex) { return sex == Sex::Female ? "F" : "M"; }

std::size_t FitTestCharacteristics::cutoffIndex(const std::string& label) const {
  auto it = std::find(cutoffs.begin(), cutoffs.end(), label);
  if (it == cutoffs.end()) throw std::invalid_argument("unknown FIT cut-off '" + label + "'");
  return static_cast<std::size_t>(it - cutoffs.begin());
}

double ParticipationParameters::returnOk(Sex sex, int period) const {
  const auto& p = of(sex);
  return p.returnRate[period - 1] * p.sampleOk[period - 1];
}

double ParticipationParameters::contact(Sex sex, int period) const { return of(sex).contact[period - 1]; }

std::vector<std::string> ParameterBundle::cutoffLabels(Sex sex) const {
  const auto& set = options.cutoffSet(sex);
  return set.empty() ? fit.cutoffs : set;
}

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

std::vector<TransitionRow> rows(const Eigen::VectorXd& nb, const Eigen::VectorXd& bl, const Eigen::VectorXd& lr) {
  std::vector<TransitionRow> out;
  for (Eigen::Index i = 0; i < nb.size(); ++i) out.push_back({nb[i], bl[i], lr[i]});
  return out;
}

}  // namespace

ParameterBundle syntheticDefaults() {
  ParameterBundle b;
  b.description =
      "SYNTHETIC parameters shaped like a biennial FIT programme for ages 60-68. "
      "Not calibrated to any registry data.";
  b.fit.unit = "ug/g";
  b.fit.cutoffs = {"10", "20", "25", "40", "50"};
  b.fit.sensitivity.resize(5, 3);
  b.fit.sensitivity << 0.12, 0.42, 0.88,  //
      0.09, 0.34, 0.82,                   //
      0.08, 0.31, 0.79,                   //
      0.06, 0.26, 0.74,                   //
      0.05, 0.23, 0.71;
  b.fit.specificity = vec({0.930, 0.955, 0.962, 0.974, 0.980});

  b.colonoscopy.sensitivity = {0.75, 0.90, 0.95};
  b.colonoscopy.bleed = 0.002;
  b.colonoscopy.perforationWithPolypectomy = 0.0012;
  b.colonoscopy.perforationWithoutPolypectomy = 0.0004;

  b.participation.female = {vec({0.74, 0.75, 0.76, 0.77, 0.77}), vec({0.98, 0.98, 0.98, 0.98, 0.98}),
                            vec({0.93, 0.93, 0.93, 0.93, 0.93})};
  b.participation.male = {vec({0.62, 0.64, 0.65, 0.66, 0.67}), vec({0.98, 0.98, 0.98, 0.98, 0.98}),
                          vec({0.91, 0.91, 0.91, 0.91, 0.91})};

  b.costs.invitation = 12.0;
  b.costs.incentive = 50.0;
  b.costs.sampleAnalysis = 6.0;
  b.costs.colonoscopy = 420.0;
  b.costs.pathology = {90.0, 120.0, 150.0};
  b.costs.polypectomy = 160.0;
  b.costs.bleed = 1800.0;
  b.costs.perforation = 9500.0;

  b.prevalenceFemale = {0.905, 0.065, 0.025, 0.005};
  b.prevalenceMale = {0.855, 0.090, 0.045, 0.010};

  b.transitions.female = rows(vec({0.030, 0.032, 0.034, 0.036, 0.038}), vec({0.065, 0.067, 0.069, 0.071, 0.073}),
                              vec({0.080, 0.083, 0.086, 0.089, 0.092}));
  b.transitions.male = rows(vec({0.040, 0.043, 0.046, 0.049, 0.052}), vec({0.075, 0.078, 0.081, 0.084, 0.087}),
                            vec({0.095, 0.099, 0.103, 0.107, 0.111}));

  b.population.female = vec({33000, 32500, 32000, 31500, 31000});
  b.population.male = vec({32000, 31200, 30400, 29600, 28800});
  return b;
}

// ---------------------------------------------------------------------------
// Validation

namespace {

bool isProbability(double p) { return std::isfinite(p) && p >= 0.0 && p <= 1.0; }

void checkProbability(double p, const std::string& path, std::vector<std::string>& issues) {
  if (!isProbability(p)) issues.push_back(path + ": probability out of range [0,1] (" + formatDouble(p) + ")");
}

void checkProbabilities(const Eigen::VectorXd& v, const std::string& path, std::vector<std::string>& issues) {
  for (Eigen::Index i = 0; i < v.size(); ++i) checkProbability(v[i], path + "[" + std::to_string(i) + "]", issues);
}

void checkCost(double c, const std::string& path, std::vector<std::string>& issues) {
  if (!std::isfinite(c) || c < 0.0) issues.push_back(path + ": cost must be finite and non-negative (" + formatDouble(c) + ")");
}

void checkLength(Eigen::Index actual, Eigen::Index expected, const std::string& path,
                 std::vector<std::string>& issues) {
  if (actual != expected) {
    issues.push_back(path + ": expected " + std::to_string(expected) + " entries, got " + std::to_string(actual));
  }
}

constexpr const char* kGrowthNames[] = {"benign", "large", "crc"};

}  // namespace

std::vector<std::string> validateParameters(const ParameterBundle& b) {
  std::vector<std::string> issues;

  const auto& fit = b.fit;
  const auto cutoffs = static_cast<Eigen::Index>(fit.cutoffs.size());
  if (fit.cutoffs.empty()) issues.push_back("fit.cutoffs: at least one cut-off is required");
  std::set<std::string> seen;
  for (const auto& c : fit.cutoffs) {
    if (c.empty()) issues.push_back("fit.cutoffs: empty label");
    if (!seen.insert(c).second) issues.push_back("fit.cutoffs: duplicate label '" + c + "'");
  }
  checkLength(fit.sensitivity.rows(), cutoffs, "fit.sensitivity", issues);
  checkLength(fit.specificity.size(), cutoffs, "fit.specificity", issues);
  for (int g = 0; g < 3; ++g) {
    checkProbabilities(fit.sensitivity.col(g), std::string("fit.sensitivity.") + kGrowthNames[g], issues);
  }
  checkProbabilities(fit.specificity, "fit.specificity", issues);

  const auto& col = b.colonoscopy;
  for (int g = 0; g < 3; ++g) {
    checkProbability(col.sensitivity[g], std::string("colonoscopy.sensitivity.") + kGrowthNames[g], issues);
  }
  checkProbability(col.bleed, "colonoscopy.bleed", issues);
  checkProbability(col.perforationWithPolypectomy, "colonoscopy.perforation_with_polypectomy", issues);
  checkProbability(col.perforationWithoutPolypectomy, "colonoscopy.perforation_without_polypectomy", issues);
  if (col.bleed + col.perforationWithPolypectomy > 1.0 || col.bleed + col.perforationWithoutPolypectomy > 1.0) {
    issues.push_back("colonoscopy: bleed plus perforation probability exceeds 1");
  }

  const auto periods = b.participation.female.returnRate.size();
  if (periods < 1) issues.push_back("participation.F.return: at least one period is required");
  for (Sex sex : kSexes) {
    const std::string s = code(sex);
    const auto& p = b.participation.of(sex);
    checkLength(p.returnRate.size(), periods, "participation." + s + ".return", issues);
    checkLength(p.sampleOk.size(), periods, "participation." + s + ".sample_ok", issues);
    checkLength(p.contact.size(), periods, "participation." + s + ".contact", issues);
    checkProbabilities(p.returnRate, "participation." + s + ".return", issues);
    checkProbabilities(p.sampleOk, "participation." + s + ".sample_ok", issues);
    checkProbabilities(p.contact, "participation." + s + ".contact", issues);

    const auto& psi = b.prevalence0(sex);
    for (int i = 0; i < 4; ++i) checkProbability(psi[i], "prevalence0." + s + "[" + std::to_string(i) + "]", issues);
    if (std::abs(psi.sum() - 1.0) > 1e-9) {
      issues.push_back("prevalence0." + s + ": simplex violation, entries sum to " + formatDouble(psi.sum()));
    }

    const auto& t = b.transitions.of(sex);
    checkLength(static_cast<Eigen::Index>(t.size()), periods, "transitions." + s, issues);
    for (std::size_t k = 0; k < t.size(); ++k) {
      const std::string kp = "[" + std::to_string(k) + "]";
      checkProbability(t[k].normalBenign, "transitions." + s + ".normal_benign" + kp, issues);
      checkProbability(t[k].benignLarge, "transitions." + s + ".benign_large" + kp, issues);
      checkProbability(t[k].largeCrc, "transitions." + s + ".large_crc" + kp, issues);
    }

    const auto& pop = b.population.of(sex);
    checkLength(pop.size(), periods, "population." + s, issues);
    for (Eigen::Index k = 0; k < pop.size(); ++k) {
      if (!std::isfinite(pop[k]) || pop[k] <= 0.0) {
        issues.push_back("population." + s + "[" + std::to_string(k) + "]: cohort size must be positive");
      }
    }

    for (const auto& label : b.options.cutoffSet(sex)) {
      if (std::find(fit.cutoffs.begin(), fit.cutoffs.end(), label) == fit.cutoffs.end()) {
        issues.push_back("options.cutoff_set." + s + ": '" + label + "' is not a FIT cut-off");
      }
    }
  }

  const auto& c = b.costs;
  checkCost(c.invitation, "costs.invitation", issues);
  checkCost(c.incentive, "costs.incentive", issues);
  checkCost(c.sampleAnalysis, "costs.sample_analysis", issues);
  checkCost(c.colonoscopy, "costs.colonoscopy", issues);
  for (int g = 0; g < 3; ++g) checkCost(c.pathology[g], std::string("costs.pathology.") + kGrowthNames[g], issues);
  checkCost(c.polypectomy, "costs.polypectomy", issues);
  checkCost(c.bleed, "costs.bleed", issues);
  checkCost(c.perforation, "costs.perforation", issues);
  return issues;
}

std::vector<std::string> parameterWarnings(const ParameterBundle& b) {
  std::vector<std::string> out;
  const auto& s = b.fit.sensitivity;
  for (int g = 0; g < 3; ++g) {
    for (Eigen::Index i = 1; i < s.rows(); ++i) {
      if (s(i, g) > s(i - 1, g)) {
        out.push_back(std::string("fit.sensitivity.") + kGrowthNames[g] +
                      ": not weakly decreasing along the declared cut-off order");
        break;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Loading

namespace {

class Reader {
 public:
  Reader(std::vector<std::string>& issues, ParameterReport& report) : issues_(issues), report_(report) {}

  bool object(const json& parent, const char* key, const std::string& path, const std::set<std::string>& keys) {
    if (!parent.contains(key)) {
      report_.defaultsUsed.push_back(path);
      return false;
    }
    const auto& v = parent.at(key);
    if (!v.is_object()) {
      issues_.push_back(path + ": expected an object");
      return false;
    }
    for (const auto& [k, _] : v.items()) {
      if (!keys.count(k)) issues_.push_back(path + "." + k + ": unknown key");
    }
    return true;
  }

  void number(const json& parent, const char* key, const std::string& path, double& out) {
    if (!parent.contains(key)) {
      report_.defaultsUsed.push_back(path);
      return;
    }
    const auto& v = parent.at(key);
    if (!v.is_number()) {
      issues_.push_back(path + ": expected a number");
      return;
    }
    out = v.get<double>();
  }

  void boolean(const json& parent, const char* key, const std::string& path, bool& out) {
    if (!parent.contains(key)) {
      report_.defaultsUsed.push_back(path);
      return;
    }
    const auto& v = parent.at(key);
    if (!v.is_boolean()) {
      issues_.push_back(path + ": expected true or false");
      return;
    }
    out = v.get<bool>();
  }

  void text(const json& parent, const char* key, const std::string& path, std::string& out) {
    if (!parent.contains(key)) {
      report_.defaultsUsed.push_back(path);
      return;
    }
    const auto& v = parent.at(key);
    if (!v.is_string()) {
      issues_.push_back(path + ": expected a string");
      return;
    }
    out = v.get<std::string>();
  }

  /// Accepts an array of numbers, or a single number broadcast over `broadcast` entries.
  void vector(const json& parent, const char* key, const std::string& path, Eigen::VectorXd& out,
              Eigen::Index broadcast = -1) {
    if (!parent.contains(key)) {
      report_.defaultsUsed.push_back(path);
      return;
    }
    const auto& v = parent.at(key);
    if (v.is_number() && broadcast > 0) {
      out = Eigen::VectorXd::Constant(broadcast, v.get<double>());
      return;
    }
    if (!v.is_array()) {
      issues_.push_back(path + ": expected an array of numbers");
      return;
    }
    Eigen::VectorXd tmp(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) {
        issues_.push_back(path + "[" + std::to_string(i) + "]: expected a number");
        return;
      }
      tmp[static_cast<Eigen::Index>(i)] = v[i].get<double>();
    }
    out = tmp;
  }

  bool labels(const json& v, const std::string& path, std::vector<std::string>& out) {
    if (!v.is_array()) {
      issues_.push_back(path + ": expected an array of labels");
      return false;
    }
    std::vector<std::string> tmp;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i].is_string()) {
        tmp.push_back(v[i].get<std::string>());
      } else if (v[i].is_number_integer()) {
        tmp.push_back(std::to_string(v[i].get<long long>()));
      } else {
        issues_.push_back(path + "[" + std::to_string(i) + "]: expected a label");
        return false;
      }
    }
    out = std::move(tmp);
    return true;
  }

 private:
  std::vector<std::string>& issues_;
  ParameterReport& report_;
};

const std::set<std::string> kSexKeys = {"F", "M"};

void readGrowthTriple(Reader& r, const json& parent, const std::string& path, Eigen::Vector3d& out) {
  for (int g = 0; g < 3; ++g) r.number(parent, kGrowthNames[g], path + "." + kGrowthNames[g], out[g]);
}

}  // namespace

LoadedParameters loadParameters(const std::string& jsonText) {
  json doc;
  try {
    doc = json::parse(jsonText);
  } catch (const json::parse_error& e) {
    throw ValidationError({std::string("$: ") + e.what()});
  }
  if (!doc.is_object()) throw ValidationError({"$: expected a JSON object"});

  LoadedParameters out{syntheticDefaults(), {}};
  auto& b = out.bundle;
  std::vector<std::string> issues;
  Reader r(issues, out.report);

  const std::set<std::string> top = {"description", "fit", "colonoscopy", "participation", "costs",
                                     "prevalence0", "transitions", "population", "options"};
  for (const auto& [k, _] : doc.items()) {
    if (!top.count(k)) issues.push_back(k + ": unknown key");
  }
  r.text(doc, "description", "description", b.description);

  if (r.object(doc, "fit", "fit", {"unit", "cutoffs", "sensitivity", "specificity"})) {
    const auto& f = doc["fit"];
    r.text(f, "unit", "fit.unit", b.fit.unit);
    if (f.contains("cutoffs")) {
      r.labels(f["cutoffs"], "fit.cutoffs", b.fit.cutoffs);
    } else {
      out.report.defaultsUsed.push_back("fit.cutoffs");
    }
    if (r.object(f, "sensitivity", "fit.sensitivity", {"benign", "large", "crc"})) {
      const auto& s = f["sensitivity"];
      std::array<Eigen::VectorXd, 3> cols;
      for (int g = 0; g < 3; ++g) cols[g] = b.fit.sensitivity.col(g);
      for (int g = 0; g < 3; ++g) {
        r.vector(s, kGrowthNames[g], std::string("fit.sensitivity.") + kGrowthNames[g], cols[g]);
      }
      if (cols[0].size() == cols[1].size() && cols[1].size() == cols[2].size()) {
        b.fit.sensitivity.resize(cols[0].size(), 3);
        for (int g = 0; g < 3; ++g) b.fit.sensitivity.col(g) = cols[g];
      } else {
        issues.push_back("fit.sensitivity: benign, large and crc need one entry per cut-off");
      }
    }
    r.vector(f, "specificity", "fit.specificity", b.fit.specificity);
  }

  if (r.object(doc, "colonoscopy", "colonoscopy",
               {"sensitivity", "bleed", "perforation_with_polypectomy", "perforation_without_polypectomy"})) {
    const auto& c = doc["colonoscopy"];
    if (r.object(c, "sensitivity", "colonoscopy.sensitivity", {"benign", "large", "crc"})) {
      readGrowthTriple(r, c["sensitivity"], "colonoscopy.sensitivity", b.colonoscopy.sensitivity);
    }
    r.number(c, "bleed", "colonoscopy.bleed", b.colonoscopy.bleed);
    r.number(c, "perforation_with_polypectomy", "colonoscopy.perforation_with_polypectomy",
             b.colonoscopy.perforationWithPolypectomy);
    r.number(c, "perforation_without_polypectomy", "colonoscopy.perforation_without_polypectomy",
             b.colonoscopy.perforationWithoutPolypectomy);
  }

  if (r.object(doc, "participation", "participation", kSexKeys)) {
    for (Sex sex : kSexes) {
      const std::string path = std::string("participation.") + code(sex);
      if (!r.object(doc["participation"], code(sex), path, {"return", "sample_ok", "contact"})) continue;
      const auto& p = doc["participation"][code(sex)];
      auto& target = sex == Sex::Female ? b.participation.female : b.participation.male;
      r.vector(p, "return", path + ".return", target.returnRate);
      const auto k = target.returnRate.size();
      r.vector(p, "sample_ok", path + ".sample_ok", target.sampleOk, k);
      r.vector(p, "contact", path + ".contact", target.contact, k);
    }
  }

  if (r.object(doc, "costs", "costs",
               {"invitation", "incentive", "sample_analysis", "colonoscopy", "pathology", "polypectomy", "bleed",
                "perforation"})) {
    const auto& c = doc["costs"];
    r.number(c, "invitation", "costs.invitation", b.costs.invitation);
    r.number(c, "incentive", "costs.incentive", b.costs.incentive);
    r.number(c, "sample_analysis", "costs.sample_analysis", b.costs.sampleAnalysis);
    r.number(c, "colonoscopy", "costs.colonoscopy", b.costs.colonoscopy);
    if (r.object(c, "pathology", "costs.pathology", {"benign", "large", "crc"})) {
      readGrowthTriple(r, c["pathology"], "costs.pathology", b.costs.pathology);
    }
    r.number(c, "polypectomy", "costs.polypectomy", b.costs.polypectomy);
    r.number(c, "bleed", "costs.bleed", b.costs.bleed);
    r.number(c, "perforation", "costs.perforation", b.costs.perforation);
  }

  if (r.object(doc, "prevalence0", "prevalence0", kSexKeys)) {
    for (Sex sex : kSexes) {
      Eigen::VectorXd v = b.prevalence0(sex);
      const std::string path = std::string("prevalence0.") + code(sex);
      r.vector(doc["prevalence0"], code(sex), path, v);
      if (v.size() != 4) {
        issues.push_back(path + ": expected 4 entries (normal, benign, large, crc)");
        continue;
      }
      (sex == Sex::Female ? b.prevalenceFemale : b.prevalenceMale) = v;
    }
  }

  if (r.object(doc, "transitions", "transitions", kSexKeys)) {
    for (Sex sex : kSexes) {
      const std::string path = std::string("transitions.") + code(sex);
      if (!r.object(doc["transitions"], code(sex), path, {"normal_benign", "benign_large", "large_crc"})) continue;
      const auto& t = doc["transitions"][code(sex)];
      auto& target = sex == Sex::Female ? b.transitions.female : b.transitions.male;
      Eigen::VectorXd nb(static_cast<Eigen::Index>(target.size())), bl(nb.size()), lr(nb.size());
      for (std::size_t k = 0; k < target.size(); ++k) {
        nb[static_cast<Eigen::Index>(k)] = target[k].normalBenign;
        bl[static_cast<Eigen::Index>(k)] = target[k].benignLarge;
        lr[static_cast<Eigen::Index>(k)] = target[k].largeCrc;
      }
      r.vector(t, "normal_benign", path + ".normal_benign", nb);
      r.vector(t, "benign_large", path + ".benign_large", bl, nb.size());
      r.vector(t, "large_crc", path + ".large_crc", lr, nb.size());
      if (nb.size() != bl.size() || nb.size() != lr.size()) {
        issues.push_back(path + ": normal_benign, benign_large and large_crc need equal lengths");
        continue;
      }
      target = rows(nb, bl, lr);
    }
  }

  if (r.object(doc, "population", "population", kSexKeys)) {
    r.vector(doc["population"], "F", "population.F", b.population.female);
    r.vector(doc["population"], "M", "population.M", b.population.male);
  }

  if (r.object(doc, "options", "options", {"fix_exam_to_colonoscopy", "incentive_enabled", "cutoff_set"})) {
    const auto& o = doc["options"];
    r.boolean(o, "fix_exam_to_colonoscopy", "options.fix_exam_to_colonoscopy", b.options.fixExamToColonoscopy);
    r.boolean(o, "incentive_enabled", "options.incentive_enabled", b.options.incentiveEnabled);
    if (!o.contains("cutoff_set")) {
      out.report.defaultsUsed.push_back("options.cutoff_set");
    } else if (o["cutoff_set"].is_array()) {
      std::vector<std::string> both;
      if (r.labels(o["cutoff_set"], "options.cutoff_set", both)) {
        b.options.cutoffSetFemale = both;
        b.options.cutoffSetMale = both;
      }
    } else if (o["cutoff_set"].is_object()) {
      for (const auto& [k, _] : o["cutoff_set"].items()) {
        if (!kSexKeys.count(k)) issues.push_back("options.cutoff_set." + k + ": unknown key");
      }
      for (Sex sex : kSexes) {
        if (!o["cutoff_set"].contains(code(sex))) continue;
        r.labels(o["cutoff_set"][code(sex)], std::string("options.cutoff_set.") + code(sex),
                 sex == Sex::Female ? b.options.cutoffSetFemale : b.options.cutoffSetMale);
      }
    } else {
      issues.push_back("options.cutoff_set: expected an array or a per-sex object");
    }
  }

  if (issues.empty()) issues = validateParameters(b);
  if (!issues.empty()) throw ValidationError(issues);
  out.report.warnings = parameterWarnings(b);
  return out;
}

LoadedParameters loadParametersFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read parameter file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return loadParameters(ss.str());
}

// ---------------------------------------------------------------------------
// Emitting

namespace {

std::string numbers(const Eigen::VectorXd& v) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) out += (i ? ", " : "") + formatDouble(v[i]);
  return out + "]";
}

std::string quoted(const std::vector<std::string>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + json(v[i]).dump();
  return out + "]";
}

std::string growth(const Eigen::Vector3d& v) {
  return "{\"benign\": " + formatDouble(v[0]) + ", \"large\": " + formatDouble(v[1]) + ", \"crc\": " +
         formatDouble(v[2]) + "}";
}

}  // namespace

std::string parametersToJson(const ParameterBundle& b) {
  std::string o = "{\n";
  o += "  \"description\": " + json(b.description).dump() + ",\n";
  o += "  \"fit\": {\n    \"unit\": " + json(b.fit.unit).dump() + ",\n    \"cutoffs\": " + quoted(b.fit.cutoffs) +
       ",\n    \"sensitivity\": {\n      \"benign\": " + numbers(b.fit.sensitivity.col(0)) +
       ",\n      \"large\": " + numbers(b.fit.sensitivity.col(1)) + ",\n      \"crc\": " +
       numbers(b.fit.sensitivity.col(2)) + "\n    },\n    \"specificity\": " + numbers(b.fit.specificity) +
       "\n  },\n";
  const auto& c = b.colonoscopy;
  o += "  \"colonoscopy\": {\n    \"sensitivity\": " + growth(c.sensitivity) + ",\n    \"bleed\": " +
       formatDouble(c.bleed) + ",\n    \"perforation_with_polypectomy\": " +
       formatDouble(c.perforationWithPolypectomy) + ",\n    \"perforation_without_polypectomy\": " +
       formatDouble(c.perforationWithoutPolypectomy) + "\n  },\n";
  o += "  \"participation\": {\n";
  for (Sex sex : kSexes) {
    const auto& p = b.participation.of(sex);
    o += std::string("    \"") + code(sex) + "\": {\"return\": " + numbers(p.returnRate) +
         ", \"sample_ok\": " + numbers(p.sampleOk) + ", \"contact\": " + numbers(p.contact) + "}" +
         (sex == Sex::Female ? ",\n" : "\n");
  }
  o += "  },\n";
  const auto& k = b.costs;
  o += "  \"costs\": {\n    \"invitation\": " + formatDouble(k.invitation) + ",\n    \"incentive\": " +
       formatDouble(k.incentive) + ",\n    \"sample_analysis\": " + formatDouble(k.sampleAnalysis) +
       ",\n    \"colonoscopy\": " + formatDouble(k.colonoscopy) + ",\n    \"pathology\": " + growth(k.pathology) +
       ",\n    \"polypectomy\": " + formatDouble(k.polypectomy) + ",\n    \"bleed\": " + formatDouble(k.bleed) +
       ",\n    \"perforation\": " + formatDouble(k.perforation) + "\n  },\n";
  o += "  \"prevalence0\": {\"F\": " + numbers(b.prevalenceFemale) + ", \"M\": " + numbers(b.prevalenceMale) +
       "},\n";
  o += "  \"transitions\": {\n";
  for (Sex sex : kSexes) {
    const auto& t = b.transitions.of(sex);
    Eigen::VectorXd nb(static_cast<Eigen::Index>(t.size())), bl(nb.size()), lr(nb.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
      nb[static_cast<Eigen::Index>(i)] = t[i].normalBenign;
      bl[static_cast<Eigen::Index>(i)] = t[i].benignLarge;
      lr[static_cast<Eigen::Index>(i)] = t[i].largeCrc;
    }
    o += std::string("    \"") + code(sex) + "\": {\"normal_benign\": " + numbers(nb) +
         ", \"benign_large\": " + numbers(bl) + ", \"large_crc\": " + numbers(lr) + "}" +
         (sex == Sex::Female ? ",\n" : "\n");
  }
  o += "  },\n";
  o += "  \"population\": {\"F\": " + numbers(b.population.female) + ", \"M\": " + numbers(b.population.male) +
       "},\n";
  o += "  \"options\": {\n    \"fix_exam_to_colonoscopy\": " +
       std::string(b.options.fixExamToColonoscopy ? "true" : "false") + ",\n    \"incentive_enabled\": " +
       std::string(b.options.incentiveEnabled ? "true" : "false") + ",\n    \"cutoff_set\": {\"F\": " +
       quoted(b.options.cutoffSetFemale) + ", \"M\": " + quoted(b.options.cutoffSetMale) + "}\n  }\n";
  o += "}\n";
  return o;
}

}  // namespace screenopt::screening
