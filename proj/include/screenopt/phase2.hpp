#pragma once

// Final selection of one strategy history per sex: minimize the population CRC
// prevalence subject to the population colonoscopy budget, by scanning every
// (female, male) pair.

#include "screenopt/phase1.hpp"

#include <cstddef>
#include <vector>

namespace screenopt::screening {

struct Candidate {
  double cancerCases = 0.0;              // expected CRC cases in the sex population (count)
  double colonoscopiesPerCapita = 0.0;   // expected colonoscopies per person
  double cost = 0.0;                     // expected euros for the sex population
};

struct SelectionProblem {
  std::vector<Candidate> female, male;
  double populationFemale = 0.0;
  double populationMale = 0.0;
  double budget = 0.0;  // colonoscopies over both populations
};

struct SelectionResult {
  std::size_t female = 0;
  std::size_t male = 0;
  double psiR = 0.0;                // (N^R_F + N^R_M) / (N_F + N_M)
  double totalColonoscopies = 0.0;  // N_F n_F + N_M n_M
  double totalCost = 0.0;
  double budget = 0.0;
  bool feasible = false;
};

/// Exact optimum; ties go to fewer colonoscopies, then lower cost, then lower
/// (female, male) index. Without a feasible pair the minimum-colonoscopy pair
/// is returned with feasible = false. Throws std::invalid_argument on an empty list.
SelectionResult selectStrategies(const SelectionProblem& problem);

/// One result per budget. Throws std::invalid_argument unless budgets ascend.
std::vector<SelectionResult> budgetSweep(const SelectionProblem& problem, const std::vector<double>& budgets);

/// Candidates from final Phase-1 histories: CRC cases = total CRC prevalence ×
/// population, colonoscopies per capita = cumulative colonoscopies / population.
std::vector<Candidate> candidatesOf(const Phase1Result& phase1, double population);

}  // namespace screenopt::screening
