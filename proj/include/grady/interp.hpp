#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "grady/effects.hpp"
#include "grady/typecheck.hpp"
#include "grady/value.hpp"

namespace grady {

// The runtime effect a run actually produced.
struct EffectTrace {
  Instance kind = Instance::Cost;
  Rat cost;                      // cost instance: accumulated ticks
  std::vector<bool> events;      // temporal instance: word over {push, pop}
  bool failed = false;           // ubound: postcondition failure indicator
  NumVal realized;               // expect: realized post-expectation
  std::string to_string() const;
};

struct Outcome {
  bool converged = false;
  RtPtr value;        // set when converged
  EffectTrace trace;  // partial trace at exhaustion for bottom
  long fuel_used = 0;
};

struct Distribution {
  // sorted support; outcomes are ground values or bottom
  struct Entry {
    bool bottom = false;
    RtPtr value;  // null for bottom
    Rat mass;
  };
  std::vector<Entry> entries;
  Rat bottom_mass() const;
  Rat total_mass() const;
};

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  // uniform in (0,1), never exactly 0 or 1
  double uniform01() { return (static_cast<double>(gen() >> 11) + 0.5) * 0x1.0p-53; }
};

// Inverse-CDF sample of the Laplace density (1/2e)*exp(-|x-m|/e); scale > 0.
double sample_laplace(double scale, double location, Rng& rng);

// Call-by-value evaluation; each recursive unfolding consumes one fuel unit.
// Fuel exhaustion yields a bottom outcome carrying the partial trace.
Outcome eval_comp(Env env, const CPtr& m, long fuel, const InstanceDescriptor& inst, Rng& rng);

// Exact finite-support distribution over outcomes by exhaustive branching of
// Bern; continuous effects (Lap) are rejected.
Distribution eval_dist(Env env, const CPtr& m, long fuel, const InstanceDescriptor& inst);

// Builds the global environment of a checked program under an assignment for
// its context parameters (value decls without bodies).
Env program_env(const TypedProgram& tp, const std::vector<std::pair<std::string, RtPtr>>& params);

}  // namespace grady
