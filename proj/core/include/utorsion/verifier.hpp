#pragma once

#include "utorsion/conditions.hpp"
#include "utorsion/digit_stream.hpp"
#include "utorsion/ideal.hpp"

#include <optional>
#include <string>
#include <vector>

namespace utorsion {

// E = {k <= N : ||u_k x|| >= eps}, three-way exact: members are certified above
// eps, excluded indices certified below, the rest reported as unresolved.
struct ExceptionReport {
  Rat epsilon;
  long long horizon = 0;
  std::vector<long long> members;
  std::vector<long long> unresolved;
  bool norms_exact = false;  // every norm came from a closed-form tail
  // Exact-mode periodicity: for k >= periodic_from the classification repeats
  // with the given period; member_residues lists the residues inside E.
  std::optional<long long> periodic_from;
  std::optional<long long> period;
  std::vector<long long> member_residues;
  bool cofinal_exclusion_certified = false;  // E proved finite for every horizon
};

ExceptionReport exception_set(const DigitStream& digits, const Rat& epsilon, long long horizon,
                              const Rat& resolution, long long step_budget = 512);

struct SmallnessPoint {
  long long checkpoint;
  Rat value;  // |E(n)|/n for density ideals, the partial submeasure otherwise
};

struct SmallnessAssessment {
  Verdict verdict;
  std::vector<SmallnessPoint> trail;
  std::string trend;  // "decreasing", "flat", "increasing", "n/a"
};

SmallnessAssessment smallness_assessment(const ExceptionReport& report, const IdealSpec& ideal,
                                         const std::vector<long long>& schedule);

enum class ConsistencyFlag { Consistent, Inconclusive, Contradiction };

const char* consistency_flag_name(ConsistencyFlag flag);

struct VerificationRun {
  ExceptionReport report;
  SmallnessAssessment smallness;
};

struct VerificationReport {
  Decision decision;
  std::vector<VerificationRun> runs;
  ConsistencyFlag flag = ConsistencyFlag::Inconclusive;
  std::string note;
};

// Runs decide, then the empirical exception-set layer for each (eps, N), and
// flags contradictions between the two.
VerificationReport run_verification(const TorsionContext& ctx, const std::vector<Rat>& eps_list,
                                    const std::vector<long long>& horizons);

}  // namespace utorsion
