#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "grady/ast.hpp"
#include "grady/numeric.hpp"

namespace grady {

struct RtVal;
using RtPtr = std::shared_ptr<const RtVal>;

// Immutable environment (linked for cheap extension).
struct EnvNode;
using Env = std::shared_ptr<const EnvNode>;
struct EnvNode {
  std::string name;
  RtPtr val;
  Env next;
};
Env env_bind(const Env& e, const std::string& n, RtPtr v);
const RtPtr* env_lookup(const Env& e, const std::string& n);

struct RtVal {
  enum class Tag { Unit, Num, Event, List, Pair, Sum, Closure, RecClosure };
  Tag tag = Tag::Unit;
  NumVal num;                // Num
  bool is_push = false;      // Event
  std::vector<RtPtr> items;  // List
  RtPtr fst, snd;            // Pair; Sum payload in fst
  bool sum_left = false;     // Sum
  Env cenv;                  // closures
  std::string fname;         // RecClosure
  std::string binder;
  CPtr body;
};

RtPtr rt_unit();
RtPtr rt_num(NumVal n);
RtPtr rt_int(long v);
RtPtr rt_rat(const Rat& v);
RtPtr rt_event(bool is_push);
RtPtr rt_list(std::vector<RtPtr> items);
RtPtr rt_pair(RtPtr a, RtPtr b);
RtPtr rt_sum(bool left, RtPtr payload);
RtPtr rt_bool(bool b);
RtPtr rt_closure(Env env, std::string binder, CPtr body);
RtPtr rt_recclosure(Env env, std::string fname, std::string binder, CPtr body);

bool rt_is_ground(const RtPtr& v);
bool rt_equal(const RtPtr& a, const RtPtr& b);
bool rt_less(const RtPtr& a, const RtPtr& b);  // deterministic order on ground values
std::string rt_to_string(const RtPtr& v);

// Evaluates a ground value term in an environment of ground values.
// Knows the semantics of every builtin effect-free operation.
RtPtr eval_ground(const VPtr& term, const Env& env);

// Two-valued formula evaluation (Omega = 2 instances). Throws EvalError on
// extended-real-only nodes.
bool eval_fml_bool(const FPtr& f, const Env& env);

// Extended-real formula evaluation (expectation instance, Omega=[0,inf]^op):
// /\ is max, \/ is min, embed maps true to 0 and false to inf.
NumVal eval_fml_extreal(const FPtr& f, const Env& env);

// Whether a value satisfies all refinements along a type's structure
// (Omega = 2 reading). Function positions are vacuously accepted.
bool refinement_holds(const RPtr& t, const RtPtr& v, Env env);

// Combined refinement value in [0,inf]^op (meet = numeric max).
NumVal refinement_value_extreal(const RPtr& t, const RtPtr& v, Env env);

}  // namespace grady
