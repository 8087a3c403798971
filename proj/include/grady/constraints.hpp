#pragma once

#include <optional>
#include <string>
#include <vector>

#include "grady/effects.hpp"
#include "grady/typecheck.hpp"
#include "grady/value.hpp"

namespace grady {

struct DomainBounds {
  long int_bound = 64;    // int grid [-B, B]; nat entries are filtered to [0, B]
  long real_density = 8;  // real grid {k/q : |k| <= B*q}
  long list_len = 2;
  std::vector<Rat> list_elems{Rat(0), Rat(1)};
  long long env_guard = 10'000'000;  // maximum raw grid product per obligation
};

using CexEnv = std::vector<std::pair<std::string, RtPtr>>;

struct DischargeResult {
  enum class Kind { Valid, Counterexample, Unknown };
  Kind kind = Kind::Unknown;
  std::string method;  // effective grid used, e.g. "grid(B=64,q=8)"
  CexEnv cex;
  std::string reason;
};

// Exhaustive check over the gridded context. "Valid" means valid on the grid;
// real-variable density is lowered (deterministically) when the raw product
// of grid sizes would exceed the enumeration guard.
DischargeResult discharge_bounded(const Obligation& ob, const DomainBounds& bounds, const InstanceDescriptor& inst);

struct FalsifyResult {
  bool found = false;
  CexEnv cex;
};

// Randomized search over wide-ranging environments; deterministic per seed.
FalsifyResult falsify_sampling(const Obligation& ob, long trials, unsigned long long seed,
                               const InstanceDescriptor& inst);

// Re-evaluates the obligation payload on a concrete environment; used for the
// counterexample agreement check. Returns true when the payload is violated
// while all context predicates hold.
bool confirm_counterexample(const Obligation& ob, const CexEnv& env, const InstanceDescriptor& inst);

// SMT-LIB2 script asserting the context and the negation of the payload, so
// `unsat` certifies validity. nullopt when the obligation leaves the
// supported arithmetic fragment (reason in *why).
std::optional<std::string> emit_smtlib(const Obligation& ob, const InstanceDescriptor& inst,
                                       std::string* why = nullptr);

}  // namespace grady
