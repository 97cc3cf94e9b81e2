#pragma once

// Multi-period strategy histories per sex: each surviving history is extended
// by every nondominated strategy of the next period's segment problem, its
// prevalences are rolled forward, and histories over the colonoscopy budget or
// dominated on (total CRC prevalence, period CRC prevalence, period large
// adenoma prevalence, cumulative colonoscopies) are dropped.

#include "screenopt/pareto.hpp"
#include "screenopt/parameters.hpp"
#include "screenopt/screening_model.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace screenopt::screening {

struct DetectedFractions {
  double benign = 0.0;
  double large = 0.0;
  double crc = 0.0;
};

/// One screening period followed by two years of progression. Throws
/// DomainError when a detected fraction exceeds its prevalence by more than 1e-12.
PrevalenceVector updatePrevalences(const PrevalenceVector& psi, const DetectedFractions& found,
                                   const TransitionRow& t);

/// Post-period prevalences for periods 1..K without screening.
std::vector<PrevalenceVector> naturalProgressionRollout(const PrevalenceVector& psi0,
                                                        const std::vector<TransitionRow>& transitions, int periods);

/// Expected detected fractions (benign, large, CRC) of a screening-segment point.
DetectedFractions detectedFractionsOf(const FrontierPoint& point);

struct PeriodRecord {
  int period = 1;
  std::uint64_t strategyIndex = 0;
  GlobalStrategy strategy;
  Eigen::VectorXd objectives;  // per invitee, minimization form, value-node order
  PrevalenceVector start;      // prevalence the period was screened at
  PrevalenceVector post;       // after screening and progression
  double colonoscopies = 0.0;  // expected, whole cohort
  double cost = 0.0;           // expected, whole cohort
};

struct StrategyHistory {
  std::vector<PeriodRecord> periods;
  double cumulativeColonoscopies = 0.0;
  double cumulativeCost = 0.0;
  PrevalenceVector totalPrevalence = PrevalenceVector::Zero();  // cohort-weighted mean of post vectors

  const PeriodRecord& last() const { return periods.back(); }
  /// Strategy index per period.
  std::vector<std::uint64_t> key() const;
  /// (total CRC, period CRC, period large adenoma, cumulative colonoscopies).
  Eigen::Vector4d comparison() const;
};

/// Extends `base` (possibly empty) by one period screened at `start`.
StrategyHistory extendHistory(const StrategyHistory& base, const ParameterBundle& params, Sex sex, int period,
                              const PrevalenceVector& start, std::uint64_t strategyIndex,
                              const GlobalStrategy& strategy, const Eigen::VectorXd& objectives);

/// Histories whose comparison vector is dominated by another's; equal vectors all survive.
std::vector<StrategyHistory> removeDominated(std::vector<StrategyHistory> histories);

enum class FrontierMethod { Mawt, BruteForce };

struct Phase1Options {
  double budget = 0.0;  // histories with more expected colonoscopies are discarded
  int periods = 0;      // 0 means every period in the bundle
  std::vector<std::size_t> objectiveMask;  // value-node ordinals; empty means all
  FrontierMethod method = FrontierMethod::Mawt;
  FrontierOptions frontier;
  std::size_t historyCap = 1'000'000;  // per period
  bool crossCheck = false;             // compare every MAWT frontier with the brute-force filter
};

struct Phase1Result {
  Sex sex = Sex::Female;
  std::vector<StrategyHistory> histories;   // sorted by key
  std::vector<std::size_t> survivorsPerPeriod;
  std::uint64_t frontierSolves = 0;
};

/// Throws EmptyFrontierError when the budget removes every history,
/// CapacityError above the history cap, OracleMismatchError on a failed cross-check.
Phase1Result runPhase1(const ParameterBundle& params, Sex sex, const Phase1Options& options);

/// The nondominated strategies of one segment at a given prevalence.
ParetoFrontier segmentFrontier(const ParameterBundle& params, Sex sex, int period, const PrevalenceVector& psi,
                               const Phase1Options& options, std::uint64_t* solves = nullptr);

}  // namespace screenopt::screening
