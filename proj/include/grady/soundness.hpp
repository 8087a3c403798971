#pragma once

#include <string>
#include <vector>

#include "grady/interp.hpp"
#include "grady/typecheck.hpp"

namespace grady {

// One environment for a soundness run: values for the program's context
// parameters plus the argument for the target function (null for
// computation targets).
struct EnvAssignment {
  std::vector<std::pair<std::string, RtPtr>> params;
  RtPtr arg;
  std::string describe() const;
};

struct SoundnessRow {
  std::string program;
  std::string target;
  std::string env;
  unsigned long long seed = 0;
  std::string grade;
  std::string observed;
  std::string tolerance;
  bool pass = true;
  bool skipped = false;
  std::string note;
};

struct SoundnessReport {
  std::vector<SoundnessRow> rows;
  bool all_pass() const;
  long passed() const;
  long failed() const;
  long skipped() const;
};

struct SoundnessConfig {
  long fuel = 64;
  long trials = 10000;
  unsigned long long seed = 42;
  double delta = 1e-3;
  long int_lo = -10, int_hi = 10;
  int list_samples = 8;
  size_t max_envs = 700;
};

// Per-instance monitors for Theorem-19-style corollaries.
// cost: observed ticks <= grade, on converged and bottom runs alike.
SoundnessReport check_cost(const TypedProgram& tp, const std::string& target,
                           const std::vector<EnvAssignment>& envs, long fuel);
// temporal: terminated word lies in gamma(grade); bottom runs get the
// prefix-safety part of the max-depth bound (flagged in the note).
SoundnessReport check_temporal(const TypedProgram& tp, const std::string& target,
                               const std::vector<EnvAssignment>& envs, long fuel);
// ubound: exact failure mass (Lap-free) or one-sided Hoeffding-gated
// empirical failure rate against the grade.
SoundnessReport check_ubound(const TypedProgram& tp, const std::string& target,
                             const std::vector<EnvAssignment>& envs, long trials, unsigned long long seed,
                             long fuel, double delta);
// expect: truncated exact post-expectation <= pre-expectation + grade.
SoundnessReport check_expect(const TypedProgram& tp, const std::string& target,
                             const std::vector<EnvAssignment>& envs, long fuel);

// Runs every runnable target of the program with generated environments.
SoundnessReport run_soundness(const TypedProgram& tp, const SoundnessConfig& cfg);

std::vector<EnvAssignment> default_envs(const TypedProgram& tp, const std::string& target,
                                        const SoundnessConfig& cfg);

// Helpers shared with the acceptance suite.
struct RunTarget {
  std::string name;
  RPtr domain;      // null for computation targets
  std::string binder;
  EPtr grade;
  RPtr result;
};
std::vector<RunTarget> runnable_targets(const TypedProgram& tp);
Outcome run_target(const TypedProgram& tp, const std::string& target, const EnvAssignment& env, long fuel,
                   Rng& rng);
Distribution dist_target(const TypedProgram& tp, const std::string& target, const EnvAssignment& env, long fuel);
// Declared grade of the target under the assignment.
GradeValue target_grade(const TypedProgram& tp, const std::string& target, const EnvAssignment& env);
// Whether the assignment satisfies every context predicate (and the
// argument's own refinement).
bool env_admissible(const TypedProgram& tp, const std::string& target, const EnvAssignment& env);

// Lower bound on the one-sided Hoeffding tolerance sqrt(ln(1/delta)/(2n)).
Rat hoeffding_epsilon(double delta, long trials);

}  // namespace grady
