#include "screenopt/report.hpp"

#include <doctest.h>

#include <algorithm>
#include <sstream>

using namespace screenopt::screening;

namespace {

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::size_t columns(const std::string& line) { return static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1; }

}  // namespace

TEST_CASE("FNV-1a reference values") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(inputHash("a") == "fnv1a64:af63dc4c8601ec8c");
  CHECK(headerComment("h") == std::string("# screenopt ") + toolVersion() + " input h\n");
}

TEST_CASE("one-period pipeline table") {
  const auto p = syntheticDefaults();
  PipelineConfig c;
  c.periods = 1;
  const auto r = runPipeline(p, c);
  CHECK(r.cases.size() == 4);
  CHECK(r.phase1Budget == 20000);
  const auto rows = lines(policyTableCsv(p, r, "x"));
  REQUIRE(rows.size() == 6);
  CHECK(rows[1] ==
        "case,budget,feasible,F_age60,M_age60,psi_R,total_colonoscopies,total_cost,female_history,male_history,"
        "female_key,male_key");
  for (std::size_t i = 2; i < rows.size(); ++i) CHECK(columns(rows[i]) == columns(rows[1]));
}

TEST_CASE("five-period exports") {
  const auto p = syntheticDefaults();
  PipelineConfig c;
  c.periods = 3;
  const auto r = runPipeline(p, c);
  const auto table = lines(policyTableCsv(p, r, "x"));
  REQUIRE(table.size() == 6);
  CHECK(columns(table[1]) == 3 + 6 + 7);
  for (std::size_t i = 2; i < table.size(); ++i) CHECK(columns(table[i]) == columns(table[1]));

  const auto hist = lines(historiesCsv(p, r.female, "x"));
  CHECK(hist.size() == r.female.histories.size() + 2);
  CHECK(columns(hist[1]) == 2 + 3 * 11 + 3);

  const auto series = lines(prevalenceSeriesCsv(p, r, "x"));
  CHECK(series.size() == 2 + 2 * 3 + 4 * 2 * 3);
}

TEST_CASE("policy cells") {
  const auto p = syntheticDefaults();
  const auto d = buildSegmentDiagram({Sex::Female, 1}, p, p.prevalence0(Sex::Female));
  const auto space = segmentStrategySpace(d, p);
  for (std::uint64_t i = 0; i < space.count(); i += 13) {
    PeriodRecord rec;
    rec.strategy = space.decode(i);
    const auto cell = policyCell(p, Sex::Female, rec);
    if (rootChoice(rec.strategy, node::kInvite) == kNo) {
      CHECK(cell == "-");
      continue;
    }
    std::string expected = p.cutoffLabels(Sex::Female)[static_cast<std::size_t>(rootChoice(rec.strategy, node::kCutoff))];
    if (rootChoice(rec.strategy, node::kIncentive) == kYes) expected += "+i";
    if (!examinesOnContact(rec.strategy)) expected += ":noexam";
    CHECK(cell == expected);
  }
}

TEST_CASE("baseline CRC prevalence rises without screening") {
  const auto p = syntheticDefaults();
  const auto rows = lines(baselineCsv(p, p.periods(), "x"));
  REQUIRE(rows.size() == 2 + 2 * 5);
  for (Sex sex : kSexes) {
    const auto series = naturalProgressionRollout(p.prevalence0(sex), p.transitions.of(sex), p.periods());
    for (std::size_t k = 1; k < series.size(); ++k) CHECK(series[k][3] >= series[k - 1][3]);
  }
}

TEST_CASE("pipeline exports are deterministic") {
  const auto p = syntheticDefaults();
  PipelineConfig c;
  c.periods = 2;
  const auto a = runPipeline(p, c);
  const auto b = runPipeline(p, c);
  CHECK(policyTableCsv(p, a, "x") == policyTableCsv(p, b, "x"));
  CHECK(historiesCsv(p, a.male, "x") == historiesCsv(p, b.male, "x"));
}

TEST_CASE("manifest") {
  ManifestInfo m;
  m.command = "pipeline";
  m.hash = "fnv1a64:0";
  m.budgets = {1, 2};
  const auto j = manifestJson(m);
  CHECK(j.find("\"input_hash\": \"fnv1a64:0\"") != std::string::npos);
  CHECK(j.back() == '\n');
}
