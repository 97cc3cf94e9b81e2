#include "screenopt/phase2.hpp"

#include <stdexcept>
#include <tuple>

namespace screenopt::screening {

SelectionResult selectStrategies(const SelectionProblem& p) {
  if (p.female.empty() || p.male.empty()) throw std::invalid_argument("selectStrategies: empty candidate list");
  const double population = p.populationFemale + p.populationMale;
  if (!(population > 0.0)) throw std::invalid_argument("selectStrategies: population must be positive");

  SelectionResult best, cheapest;
  bool haveBest = false, haveCheapest = false;
  for (std::size_t f = 0; f < p.female.size(); ++f) {
    for (std::size_t m = 0; m < p.male.size(); ++m) {
      SelectionResult r;
      r.female = f;
      r.male = m;
      r.budget = p.budget;
      r.psiR = (p.female[f].cancerCases + p.male[m].cancerCases) / population;
      r.totalColonoscopies = p.populationFemale * p.female[f].colonoscopiesPerCapita +
                             p.populationMale * p.male[m].colonoscopiesPerCapita;
      r.totalCost = p.female[f].cost + p.male[m].cost;
      r.feasible = r.totalColonoscopies <= p.budget;

      const auto rank = [](const SelectionResult& x) {
        return std::tie(x.psiR, x.totalColonoscopies, x.totalCost, x.female, x.male);
      };
      if (r.feasible && (!haveBest || rank(r) < rank(best))) {
        best = r;
        haveBest = true;
      }
      const auto usage = [](const SelectionResult& x) {
        return std::tie(x.totalColonoscopies, x.psiR, x.totalCost, x.female, x.male);
      };
      if (!haveCheapest || usage(r) < usage(cheapest)) {
        cheapest = r;
        haveCheapest = true;
      }
    }
  }
  return haveBest ? best : cheapest;
}

std::vector<SelectionResult> budgetSweep(const SelectionProblem& problem, const std::vector<double>& budgets) {
  for (std::size_t i = 1; i < budgets.size(); ++i) {
    if (budgets[i] < budgets[i - 1]) throw std::invalid_argument("budgetSweep: budgets must be ascending");
  }
  std::vector<SelectionResult> out;
  for (double b : budgets) {
    SelectionProblem p = problem;
    p.budget = b;
    out.push_back(selectStrategies(p));
  }
  return out;
}

std::vector<Candidate> candidatesOf(const Phase1Result& phase1, double population) {
  std::vector<Candidate> out;
  for (const auto& h : phase1.histories) {
    out.push_back({h.totalPrevalence[3] * population, h.cumulativeColonoscopies / population, h.cumulativeCost});
  }
  return out;
}

}  // namespace screenopt::screening
