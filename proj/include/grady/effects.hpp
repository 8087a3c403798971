#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "grady/ast.hpp"
#include "grady/value.hpp"

namespace grady {

// A concrete element of the active instance's grading monoid.
struct GradeValue {
  enum class Carrier { NatInf, RealNN, Stack, ExtReal };
  Carrier carrier = Carrier::NatInf;
  bool inf = false;     // NatInf infinity
  Rat nat;              // NatInf finite value
  NumVal real;          // RealNN / ExtReal ([0,inf) resp. [0,inf])
  std::int64_t delta = 0;     // Stack net depth
  std::int64_t maxdepth = 0;  // Stack peak depth, >= 0

  static GradeValue nat_inf();
  static GradeValue nat_of(const Rat& n);
  static GradeValue realnn(NumVal v);
  static GradeValue extreal(NumVal v);
  static GradeValue stack(std::int64_t d, std::int64_t m);

  std::string to_string() const;
  bool operator==(const GradeValue& o) const;
};

struct InstanceDescriptor {
  Instance kind;
  std::string name;
  SignatureTable sigs;
};

// Builds the descriptor (monoid + signature vocabularies) for an instance.
const InstanceDescriptor& instance_descriptor(Instance kind);

GradeValue munit(const InstanceDescriptor& inst);
GradeValue mmul(const InstanceDescriptor& inst, const GradeValue& a, const GradeValue& b);
// Three-valued order; mleq(a,b) is `compare == True`.
Cmp3 mcompare(const InstanceDescriptor& inst, const GradeValue& a, const GradeValue& b);
bool mleq(const InstanceDescriptor& inst, const GradeValue& a, const GradeValue& b);

// Homomorphic evaluation of a dependent-effect term under a ground environment.
GradeValue eval_effect(const EPtr& e, const Env& env, const InstanceDescriptor& inst);

// Normal form of an effect term as a single basic effect with ground
// arguments (additive instances collapse to one basic effect; the temporal
// instance collapses to stack(d-expr, m-expr)). Used for grade synthesis of
// case expressions. Returns nullptr when the effect mentions an unknown
// basic effect.
EPtr normalize_effect(const EPtr& e, const InstanceDescriptor& inst);
// Pointwise conditional of two normalized effects on a ground boolean term.
EPtr effect_ite(const VPtr& cond, const EPtr& then_e, const EPtr& else_e, const InstanceDescriptor& inst);

// Grade of an effect term as an extended-real formula (expect instance hook).
FPtr effect_as_extreal_formula(const EPtr& e);

// Word-level semantics of the temporal stack abstraction:
// gamma(d, M) = L_depth(d) ∩ L_max_depth(M) over the alphabet {push, pop}.
bool word_in_gamma(const std::vector<bool>& word, std::int64_t d, std::int64_t m);
std::pair<std::int64_t, std::int64_t> word_net_peak(const std::vector<bool>& word);

}  // namespace grady
