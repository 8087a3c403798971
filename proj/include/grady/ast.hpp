#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "grady/numeric.hpp"

namespace grady {

struct Span {
  int line = 0;
  int col = 0;
};

enum class BaseTy { Unit, Int, Real, Event, List, ListList };
std::string base_name(BaseTy b);

// ---------------------------------------------------------------------------
// Simple types

struct SType;
using STy = std::shared_ptr<const SType>;

struct SType {
  enum class Tag { Base, Prod, Sum, Arrow };
  Tag tag;
  BaseTy base = BaseTy::Unit;
  STy t1, t2;  // Prod/Sum components; Arrow: t1 -> T t2
};

STy s_base(BaseTy b);
STy s_prod(STy a, STy b);
STy s_sum(STy a, STy b);
STy s_arrow(STy a, STy res);
STy s_bool();

bool stype_equal(const STy& a, const STy& b);
bool stype_ground(const STy& t);
std::string stype_to_string(const STy& t);

// ---------------------------------------------------------------------------
// Terms

struct VTerm;
struct CTerm;
struct RType;
struct CType;
struct Eff;
struct Fml;

using VPtr = std::shared_ptr<const VTerm>;
using CPtr = std::shared_ptr<const CTerm>;
using RPtr = std::shared_ptr<const RType>;
using CTyPtr = std::shared_ptr<const CType>;
using EPtr = std::shared_ptr<const Eff>;
using FPtr = std::shared_ptr<const Fml>;

struct VTerm {
  enum class Tag { Var, Lam, Unit, Pair, Inl, Inr, RecFun, OpApp, Lit, EventLit, Proj1, Proj2, Ascribe };
  Tag tag;
  Span span;
  std::string name;    // Var / OpApp op name / RecFun function name
  std::string binder;  // Lam / RecFun parameter
  VPtr v1, v2;
  CPtr body;           // Lam / RecFun
  Rat lit;             // Lit
  bool lit_is_real = false;
  bool is_push = false;  // EventLit
  RPtr ascribed;
};

struct CTerm {
  enum class Tag { Return, Let, MatchPair, App, GenEff, Case, Ascribe };
  Tag tag;
  Span span;
  VPtr v1, v2;              // Return(v1); App(v1 v2); GenEff arg v1; scrutinee v1
  std::string name;         // Let binder / GenEff name
  std::string x, y;         // MatchPair and Case binders
  CPtr c1, c2;              // Let head/body; Case branches; MatchPair body = c1; Ascribe body = c1
  std::vector<VPtr> ghosts; // GenEff ghost arguments
  EPtr let_grade;           // optional `in[E]` annotation on Let
  CTyPtr ascribed;
};

struct Fml {
  enum class Tag { True, False, Atom, And, Or, Implies, Embed, Num, Add, Sub, Mul };
  Tag tag;
  std::string pred;  // Atom predicate symbol: "=", "<=", "<", or user-declared
  VPtr arg;          // Atom argument (often a pair term); Num ground term
  FPtr f1, f2;
};

struct Eff {
  enum class Tag { Unit, Mul, Basic };
  Tag tag;
  EPtr e1, e2;
  std::string be;
  VPtr arg;
};

struct RType {
  enum class Tag { RefBase, DPair, DFun, Sum };
  Tag tag;
  std::string binder;  // RefBase var, DPair/DFun binder
  BaseTy base = BaseTy::Unit;
  FPtr fml;
  RPtr t1, t2;  // DPair(t1,t2), Sum(t1,t2), DFun domain t1
  CTyPtr ct;    // DFun codomain
};

struct CType {
  EPtr grade;
  RPtr val;
};

// Constructors
VPtr v_var(std::string n, Span sp = {});
VPtr v_lam(std::string binder, CPtr body, Span sp = {});
VPtr v_unit(Span sp = {});
VPtr v_pair(VPtr a, VPtr b, Span sp = {});
VPtr v_inl(VPtr a, Span sp = {});
VPtr v_inr(VPtr a, Span sp = {});
VPtr v_recfun(std::string f, std::string x, CPtr body, Span sp = {});
VPtr v_op(std::string op, VPtr arg, Span sp = {});
VPtr v_lit(Rat v, bool is_real, Span sp = {});
VPtr v_event(bool is_push, Span sp = {});
VPtr v_proj1(VPtr a, Span sp = {});
VPtr v_proj2(VPtr a, Span sp = {});
VPtr v_ascribe(VPtr a, RPtr t, Span sp = {});
VPtr v_true();
VPtr v_false();

CPtr c_return(VPtr v, Span sp = {});
CPtr c_let(std::string x, CPtr head, CPtr body, EPtr grade = nullptr, Span sp = {});
CPtr c_matchpair(VPtr scrut, std::string x, std::string y, CPtr body, Span sp = {});
CPtr c_app(VPtr f, VPtr a, Span sp = {});
CPtr c_geneff(std::string g, VPtr a, std::vector<VPtr> ghosts = {}, Span sp = {});
CPtr c_case(VPtr scrut, std::string x, CPtr l, std::string y, CPtr r, Span sp = {});
CPtr c_ascribe(CPtr m, CTyPtr t, Span sp = {});

FPtr f_true();
FPtr f_false();
FPtr f_atom(std::string pred, VPtr arg);
FPtr f_and(FPtr a, FPtr b);
FPtr f_or(FPtr a, FPtr b);
FPtr f_implies(FPtr a, FPtr b);
FPtr f_embed(FPtr a);
FPtr f_num(VPtr t);
FPtr f_add(FPtr a, FPtr b);
FPtr f_sub(FPtr a, FPtr b);
FPtr f_mul(FPtr a, FPtr b);

EPtr e_unit();
EPtr e_mul(EPtr a, EPtr b);
EPtr e_basic(std::string be, VPtr arg);

RPtr r_refbase(std::string binder, BaseTy b, FPtr fml);
RPtr r_dpair(std::string binder, RPtr a, RPtr b);
RPtr r_dfun(std::string binder, RPtr dom, CTyPtr cod);
RPtr r_sum(RPtr a, RPtr b);
CTyPtr c_type(EPtr grade, RPtr val);
RPtr r_base(BaseTy b);  // {x:b|true}
RPtr r_bool();          // unit+unit, trivially refined

// ---------------------------------------------------------------------------
// Context and signatures

struct ContextEntry {
  std::string name;
  RPtr type;
};
using Context = std::vector<ContextEntry>;

std::optional<RPtr> ctx_lookup(const Context& ctx, const std::string& name);

struct OpSig {
  // (x : ref_arg) |-> ref_res ; simple signature derivable by erasure.
  std::string binder;
  RPtr ref_arg;
  RPtr ref_res;
};

struct GefSig {
  std::string binder;
  RPtr ref_arg;
  RPtr ref_res;
  EPtr grade;
  std::vector<std::pair<std::string, RPtr>> ghosts;
};

struct SignatureTable {
  // Several simple-type overloads may share an op name.
  std::vector<std::pair<std::string, OpSig>> ops;
  std::vector<std::pair<std::string, GefSig>> geneffs;
  std::vector<std::pair<std::string, STy>> basic_effects;  // name -> ground arg type
  std::vector<std::pair<std::string, STy>> predicates;     // name -> ground arg type

  bool has_op(const std::string& n) const;
  bool has_geneff(const std::string& n) const;
  bool has_basic_effect(const std::string& n) const;
  std::vector<const OpSig*> op_overloads(const std::string& n) const;
  const GefSig* geneff(const std::string& n) const;
  std::vector<STy> pred_overloads(const std::string& n) const;
  const STy* basic_effect_arg(const std::string& n) const;
};

// ---------------------------------------------------------------------------
// Free variables, substitution, alpha-equality, ground checks

void free_vars(const VPtr& v, std::set<std::string>& out);
void free_vars(const CPtr& c, std::set<std::string>& out);
void free_vars(const FPtr& f, std::set<std::string>& out);
void free_vars(const EPtr& e, std::set<std::string>& out);
void free_vars(const RPtr& t, std::set<std::string>& out);
void free_vars(const CTyPtr& t, std::set<std::string>& out);
bool occurs_free(const std::string& x, const EPtr& e);
bool occurs_free(const std::string& x, const RPtr& t);
bool occurs_free(const std::string& x, const CTyPtr& t);

// v must be a ground value term; substitution is capture-avoiding.
VPtr subst(const VPtr& target, const std::string& x, const VPtr& v);
CPtr subst(const CPtr& target, const std::string& x, const VPtr& v);
FPtr subst(const FPtr& target, const std::string& x, const VPtr& v);
EPtr subst(const EPtr& target, const std::string& x, const VPtr& v);
RPtr subst(const RPtr& target, const std::string& x, const VPtr& v);
CTyPtr subst(const CTyPtr& target, const std::string& x, const VPtr& v);

// Reduces proj1/proj2 applied to literal pairs; applied after substitution.
VPtr normalize_projections(const VPtr& v);

bool is_ground_term(const VPtr& v);

bool alpha_equal(const VPtr& a, const VPtr& b);
bool alpha_equal(const CPtr& a, const CPtr& b);
bool alpha_equal(const FPtr& a, const FPtr& b);
bool alpha_equal(const EPtr& a, const EPtr& b);
bool alpha_equal(const RPtr& a, const RPtr& b);
bool alpha_equal(const CTyPtr& a, const CTyPtr& b);

// Fresh-name supply used by the parser and by capture-avoiding substitution.
std::string fresh_name(const std::string& hint);
void reset_fresh_counter();

// ---------------------------------------------------------------------------
// Erasure

STy erase(const RPtr& t);
STy erase_comp(const CTyPtr& t);  // value type of the computation
std::vector<std::pair<std::string, STy>> erase(const Context& ctx);

// ---------------------------------------------------------------------------
// Programs

enum class Instance { Cost, Temporal, Ubound, Expect };
std::string instance_name(Instance i);
std::optional<Instance> instance_from_name(const std::string& s);

struct Decl {
  std::string name;
  Span span;
  bool is_computation = false;  // annotated with a computation type
  RPtr vtype;                   // value decls
  CTyPtr ctype;                 // computation decls
  VPtr vbody;                   // nullable: pure context parameter
  CPtr cbody;
};

struct Program {
  Instance instance = Instance::Cost;
  std::string source_name;
  std::vector<Decl> decls;
};

}  // namespace grady
