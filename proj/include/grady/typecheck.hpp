#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "grady/ast.hpp"
#include "grady/effects.hpp"

namespace grady {

struct TypeError : std::runtime_error {
  Span span;
  TypeError(const std::string& msg, Span sp)
      : std::runtime_error(msg + " (at " + std::to_string(sp.line) + ":" + std::to_string(sp.col) + ")"),
        span(sp) {}
};

// A semantic judgment awaiting discharge: either Gamma |= lhs => rhs (under a
// fresh binder for the refined base) or Gamma |= e1 <= e2.
struct Obligation {
  enum class Kind { Implication, Subeffect };
  int id = 0;
  Kind kind = Kind::Implication;
  std::string rule;
  Span span;
  Context ctx;
  // Implication payload
  std::string binder;
  BaseTy binder_base = BaseTy::Unit;
  bool has_binder = false;
  FPtr lhs, rhs;
  // Subeffect payload
  EPtr e1, e2;
};

struct CheckedDecl {
  std::string name;
  bool is_computation = false;
  RPtr vtype;
  CTyPtr ctype;
  VPtr vbody;  // null for context parameters
  CPtr cbody;
};

struct TypedProgram {
  Instance instance = Instance::Cost;
  std::string source_name;
  std::vector<CheckedDecl> decls;
  Context toplevel;  // value declarations in order
  std::vector<Obligation> obligations;
};

// Simple-type layer (standard FGCBV). Throws TypeError.
using SEnv = std::vector<std::pair<std::string, STy>>;
STy check_simple_value(const SEnv& env, const SignatureTable& sigs, const VPtr& v);
STy check_simple_comp(const SEnv& env, const SignatureTable& sigs, const CPtr& c);

// Well-formedness of types, formulas, and effect terms under a context.
void wf(const Context& ctx, const RPtr& t, const InstanceDescriptor& inst);
void wf(const Context& ctx, const CTyPtr& t, const InstanceDescriptor& inst);
void wf_effect(const Context& ctx, const EPtr& e, const InstanceDescriptor& inst);
void wf_formula(const Context& ctx, const FPtr& f, const std::string& binder, BaseTy base,
                const InstanceDescriptor& inst);

// Bidirectional refinement layer. Obligations are appended to `out`.
RPtr infer_value(const Context& ctx, const VPtr& v, const InstanceDescriptor& inst, std::vector<Obligation>& out);
void check_value(const Context& ctx, const VPtr& v, const RPtr& t, const InstanceDescriptor& inst,
                 std::vector<Obligation>& out);
void check_comp(const Context& ctx, const CPtr& c, const CTyPtr& t, const InstanceDescriptor& inst,
                std::vector<Obligation>& out);
void subtype(const Context& ctx, const RPtr& a, const RPtr& b, const InstanceDescriptor& inst,
             const std::string& rule, Span span, std::vector<Obligation>& out);
void subtype_comp(const Context& ctx, const CTyPtr& a, const CTyPtr& b, const InstanceDescriptor& inst,
                  const std::string& rule, Span span, std::vector<Obligation>& out);

// Full pipeline: well-formedness, simple layer, refinement layer.
TypedProgram check_program(const Program& p);

}  // namespace grady
