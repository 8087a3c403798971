#include "grady/typecheck.hpp"

#include <algorithm>

#include "grady/pretty.hpp"

namespace grady {

namespace {

[[noreturn]] void err(const std::string& msg, Span sp) { throw TypeError(msg, sp); }

const STy* senv_lookup(const SEnv& env, const std::string& n) {
  for (auto it = env.rbegin(); it != env.rend(); ++it)
    if (it->first == n) return &it->second;
  return nullptr;
}

bool literal_fits(const VPtr& v, const STy& want) {
  return v->tag == VTerm::Tag::Lit && !v->lit_is_real && want->tag == SType::Tag::Base &&
         want->base == BaseTy::Real;
}

void scheck_v(const SEnv& env, const SignatureTable& sigs, const VPtr& v, const STy& want);

STy sinfer_v(const SEnv& env, const SignatureTable& sigs, const VPtr& v) {
  switch (v->tag) {
    case VTerm::Tag::Var: {
      const STy* t = senv_lookup(env, v->name);
      if (!t) err("unbound variable " + display_name(v->name), v->span);
      return *t;
    }
    case VTerm::Tag::Unit: return s_base(BaseTy::Unit);
    case VTerm::Tag::Lit: return s_base(v->lit_is_real ? BaseTy::Real : BaseTy::Int);
    case VTerm::Tag::EventLit: return s_base(BaseTy::Event);
    case VTerm::Tag::Pair: return s_prod(sinfer_v(env, sigs, v->v1), sinfer_v(env, sigs, v->v2));
    case VTerm::Tag::Proj1: {
      STy t = sinfer_v(env, sigs, v->v1);
      if (t->tag != SType::Tag::Prod) err("fst expects a pair", v->span);
      return t->t1;
    }
    case VTerm::Tag::Proj2: {
      STy t = sinfer_v(env, sigs, v->v1);
      if (t->tag != SType::Tag::Prod) err("snd expects a pair", v->span);
      return t->t2;
    }
    case VTerm::Tag::Ascribe: {
      STy t = erase(v->ascribed);
      scheck_v(env, sigs, v->v1, t);
      return t;
    }
    case VTerm::Tag::Inl:
    case VTerm::Tag::Inr: err("sum injection needs an expected type", v->span);
    case VTerm::Tag::Lam:
    case VTerm::Tag::RecFun: err("function needs an expected type", v->span);
    case VTerm::Tag::OpApp: break;
  }
  const std::string& op = v->name;
  if (op == "ite") {
    if (v->v1->tag != VTerm::Tag::Pair || v->v1->v2->tag != VTerm::Tag::Pair)
      err("if-term expects condition and two branches", v->span);
    scheck_v(env, sigs, v->v1->v1, s_bool());
    STy t = sinfer_v(env, sigs, v->v1->v2->v1);
    scheck_v(env, sigs, v->v1->v2->v2, t);
    if (!stype_ground(t)) err("if-term branches must be ground", v->span);
    return t;
  }
  auto overloads = sigs.op_overloads(op);
  if (overloads.empty()) err("unknown operation " + op, v->span);
  std::string last_err;
  for (const OpSig* sig : overloads) {
    try {
      scheck_v(env, sigs, v->v1, erase(sig->ref_arg));
      return erase(sig->ref_res);
    } catch (const TypeError& e) {
      last_err = e.what();
    }
  }
  err("no overload of " + op + " matches: " + last_err, v->span);
}

void scheck_v(const SEnv& env, const SignatureTable& sigs, const VPtr& v, const STy& want) {
  switch (v->tag) {
    case VTerm::Tag::Lam: {
      if (want->tag != SType::Tag::Arrow) err("function used at non-function type", v->span);
      SEnv e2 = env;
      e2.emplace_back(v->binder, want->t1);
      STy res = check_simple_comp(e2, sigs, v->body);
      if (!stype_equal(res, want->t2)) err("function body type mismatch", v->span);
      return;
    }
    case VTerm::Tag::RecFun: {
      if (want->tag != SType::Tag::Arrow) err("recursive function used at non-function type", v->span);
      SEnv e2 = env;
      e2.emplace_back(v->name, want);
      e2.emplace_back(v->binder, want->t1);
      STy res = check_simple_comp(e2, sigs, v->body);
      if (!stype_equal(res, want->t2)) err("recursive function body type mismatch", v->span);
      return;
    }
    case VTerm::Tag::Inl: {
      if (want->tag != SType::Tag::Sum) err("inl used at non-sum type", v->span);
      scheck_v(env, sigs, v->v1, want->t1);
      return;
    }
    case VTerm::Tag::Inr: {
      if (want->tag != SType::Tag::Sum) err("inr used at non-sum type", v->span);
      scheck_v(env, sigs, v->v1, want->t2);
      return;
    }
    case VTerm::Tag::Pair: {
      if (want->tag != SType::Tag::Prod) err("pair used at non-pair type", v->span);
      scheck_v(env, sigs, v->v1, want->t1);
      scheck_v(env, sigs, v->v2, want->t2);
      return;
    }
    default: break;
  }
  if (literal_fits(v, want)) return;
  STy got = sinfer_v(env, sigs, v);
  if (!stype_equal(got, want))
    err("type mismatch: expected " + stype_to_string(want) + ", got " + stype_to_string(got), v->span);
}

STy sinfer_c(const SEnv& env, const SignatureTable& sigs, const CPtr& c);

void scheck_c(const SEnv& env, const SignatureTable& sigs, const CPtr& c, const STy& want) {
  switch (c->tag) {
    case CTerm::Tag::Return: scheck_v(env, sigs, c->v1, want); return;
    case CTerm::Tag::Let: {
      STy a = sinfer_c(env, sigs, c->c1);
      SEnv e2 = env;
      e2.emplace_back(c->name, a);
      scheck_c(e2, sigs, c->c2, want);
      return;
    }
    case CTerm::Tag::Case: {
      STy s = sinfer_v(env, sigs, c->v1);
      if (s->tag != SType::Tag::Sum) err("case scrutinee must have sum type", c->span);
      SEnv el = env;
      el.emplace_back(c->x, s->t1);
      scheck_c(el, sigs, c->c1, want);
      SEnv er = env;
      er.emplace_back(c->y, s->t2);
      scheck_c(er, sigs, c->c2, want);
      return;
    }
    case CTerm::Tag::MatchPair: {
      STy s = sinfer_v(env, sigs, c->v1);
      if (s->tag != SType::Tag::Prod) err("match scrutinee must have pair type", c->span);
      SEnv e2 = env;
      e2.emplace_back(c->x, s->t1);
      e2.emplace_back(c->y, s->t2);
      scheck_c(e2, sigs, c->c1, want);
      return;
    }
    default: {
      STy got = sinfer_c(env, sigs, c);
      if (!stype_equal(got, want))
        err("computation type mismatch: expected " + stype_to_string(want) + ", got " + stype_to_string(got),
            c->span);
    }
  }
}

STy sinfer_c(const SEnv& env, const SignatureTable& sigs, const CPtr& c) {
  switch (c->tag) {
    case CTerm::Tag::Return: return sinfer_v(env, sigs, c->v1);
    case CTerm::Tag::App: {
      STy f = sinfer_v(env, sigs, c->v1);
      if (f->tag != SType::Tag::Arrow) err("application of a non-function", c->span);
      scheck_v(env, sigs, c->v2, f->t1);
      return f->t2;
    }
    case CTerm::Tag::GenEff: {
      const GefSig* g = sigs.geneff(c->name);
      if (!g) err("unknown generic effect " + c->name, c->span);
      scheck_v(env, sigs, c->v1, erase(g->ref_arg));
      if (c->ghosts.size() != g->ghosts.size())
        err("generic effect " + c->name + " expects " + std::to_string(g->ghosts.size()) + " ghost argument(s)",
            c->span);
      for (size_t i = 0; i < c->ghosts.size(); ++i) scheck_v(env, sigs, c->ghosts[i], erase(g->ghosts[i].second));
      return erase(g->ref_res);
    }
    case CTerm::Tag::Let: {
      STy a = sinfer_c(env, sigs, c->c1);
      SEnv e2 = env;
      e2.emplace_back(c->name, a);
      return sinfer_c(e2, sigs, c->c2);
    }
    case CTerm::Tag::MatchPair: {
      STy s = sinfer_v(env, sigs, c->v1);
      if (s->tag != SType::Tag::Prod) err("match scrutinee must have pair type", c->span);
      SEnv e2 = env;
      e2.emplace_back(c->x, s->t1);
      e2.emplace_back(c->y, s->t2);
      return sinfer_c(e2, sigs, c->c1);
    }
    case CTerm::Tag::Case: {
      STy s = sinfer_v(env, sigs, c->v1);
      if (s->tag != SType::Tag::Sum) err("case scrutinee must have sum type", c->span);
      SEnv el = env;
      el.emplace_back(c->x, s->t1);
      STy l = sinfer_c(el, sigs, c->c1);
      SEnv er = env;
      er.emplace_back(c->y, s->t2);
      scheck_c(er, sigs, c->c2, l);
      return l;
    }
    case CTerm::Tag::Ascribe: {
      STy t = erase_comp(c->ascribed);
      scheck_c(env, sigs, c->c1, t);
      return t;
    }
  }
  err("bad computation", c->span);
}

}  // namespace

STy check_simple_value(const SEnv& env, const SignatureTable& sigs, const VPtr& v) {
  return sinfer_v(env, sigs, v);
}
STy check_simple_comp(const SEnv& env, const SignatureTable& sigs, const CPtr& c) {
  return sinfer_c(env, sigs, c);
}

// --- well-formedness ------------------------------------------------------------

namespace {

SEnv erased_env(const Context& ctx) {
  SEnv env;
  for (auto& e : ctx) env.emplace_back(e.name, erase(e.type));
  return env;
}

void wf_fml_mode(const SEnv& env, const SignatureTable& sigs, const FPtr& f, bool extreal, Span sp,
                 const InstanceDescriptor& inst) {
  switch (f->tag) {
    case Fml::Tag::True:
    case Fml::Tag::False: return;
    case Fml::Tag::And:
    case Fml::Tag::Or:
      wf_fml_mode(env, sigs, f->f1, extreal, sp, inst);
      wf_fml_mode(env, sigs, f->f2, extreal, sp, inst);
      return;
    case Fml::Tag::Implies:
      if (extreal) err("implication is not an extended-real formula", sp);
      wf_fml_mode(env, sigs, f->f1, false, sp, inst);
      wf_fml_mode(env, sigs, f->f2, false, sp, inst);
      return;
    case Fml::Tag::Atom: {
      if (extreal) err("bare predicate in an extended-real formula; use <...>", sp);
      if (!is_ground_term(f->arg)) err("predicate argument must be a ground value term", sp);
      auto preds = sigs.pred_overloads(f->pred);
      if (preds.empty()) err("unknown predicate symbol " + f->pred, sp);
      std::string last;
      for (auto& want : preds) {
        try {
          scheck_v(env, sigs, f->arg, want);
          return;
        } catch (const TypeError& e) {
          last = e.what();
        }
      }
      err("predicate " + f->pred + " argument ill-typed: " + last, sp);
    }
    case Fml::Tag::Embed:
      if (!extreal) err("<...> embedding is only available in the expectation instance", sp);
      wf_fml_mode(env, sigs, f->f1, false, sp, inst);
      return;
    case Fml::Tag::Num: {
      if (!extreal) err("numeric formulas are only available in the expectation instance", sp);
      if (!is_ground_term(f->arg)) err("numeric formula must be a ground value term", sp);
      STy t = sinfer_v(env, sigs, f->arg);
      if (t->tag != SType::Tag::Base || (t->base != BaseTy::Real && t->base != BaseTy::Int))
        err("numeric formula must have real type", sp);
      return;
    }
    case Fml::Tag::Add:
    case Fml::Tag::Sub:
    case Fml::Tag::Mul:
      if (!extreal) err("formula arithmetic is only available in the expectation instance", sp);
      wf_fml_mode(env, sigs, f->f1, true, sp, inst);
      wf_fml_mode(env, sigs, f->f2, true, sp, inst);
      return;
  }
}

}  // namespace

void wf_formula(const Context& ctx, const FPtr& f, const std::string& binder, BaseTy base,
                const InstanceDescriptor& inst) {
  SEnv env = erased_env(ctx);
  if (!binder.empty()) env.emplace_back(binder, s_base(base));
  wf_fml_mode(env, inst.sigs, f, inst.kind == Instance::Expect, Span{}, inst);
}

void wf_effect(const Context& ctx, const EPtr& e, const InstanceDescriptor& inst) {
  switch (e->tag) {
    case Eff::Tag::Unit: return;
    case Eff::Tag::Mul:
      wf_effect(ctx, e->e1, inst);
      wf_effect(ctx, e->e2, inst);
      return;
    case Eff::Tag::Basic: {
      const STy* arg_ty = inst.sigs.basic_effect_arg(e->be);
      if (!arg_ty) err("unknown basic effect " + e->be + " in the " + inst.name + " instance", Span{});
      if (!is_ground_term(e->arg)) err("basic effect argument must be a ground value term", Span{});
      // predicates in the context are not used here: only the underlying
      // simple context matters for effect well-formedness
      scheck_v(erased_env(ctx), inst.sigs, e->arg, *arg_ty);
      return;
    }
  }
}

void wf(const Context& ctx, const RPtr& t, const InstanceDescriptor& inst) {
  switch (t->tag) {
    case RType::Tag::RefBase: wf_formula(ctx, t->fml, t->binder, t->base, inst); return;
    case RType::Tag::DPair: {
      wf(ctx, t->t1, inst);
      Context c2 = ctx;
      c2.push_back({t->binder, t->t1});
      wf(c2, t->t2, inst);
      return;
    }
    case RType::Tag::DFun: {
      wf(ctx, t->t1, inst);
      Context c2 = ctx;
      c2.push_back({t->binder, t->t1});
      wf(c2, t->ct, inst);
      return;
    }
    case RType::Tag::Sum:
      wf(ctx, t->t1, inst);
      wf(ctx, t->t2, inst);
      return;
  }
}

void wf(const Context& ctx, const CTyPtr& t, const InstanceDescriptor& inst) {
  wf_effect(ctx, t->grade, inst);
  wf(ctx, t->val, inst);
}

// --- obligations -----------------------------------------------------------------

namespace {

int g_obligation_id = 0;

void emit_subeffect(std::vector<Obligation>& out, const Context& ctx, const std::string& rule, Span sp,
                    const EPtr& e1, const EPtr& e2) {
  Obligation ob;
  ob.id = ++g_obligation_id;
  ob.kind = Obligation::Kind::Subeffect;
  ob.rule = rule;
  ob.span = sp;
  ob.ctx = ctx;
  ob.e1 = e1;
  ob.e2 = e2;
  out.push_back(std::move(ob));
}

void emit_implication(std::vector<Obligation>& out, const Context& ctx, const std::string& rule, Span sp,
                      const std::string& binder, BaseTy base, FPtr lhs, FPtr rhs) {
  Obligation ob;
  ob.id = ++g_obligation_id;
  ob.kind = Obligation::Kind::Implication;
  ob.rule = rule;
  ob.span = sp;
  ob.ctx = ctx;
  ob.binder = binder;
  ob.binder_base = base;
  ob.has_binder = !binder.empty();
  ob.lhs = std::move(lhs);
  ob.rhs = std::move(rhs);
  out.push_back(std::move(ob));
}

bool is_unit_refbase(const RPtr& t) { return t->tag == RType::Tag::RefBase && t->base == BaseTy::Unit; }

bool is_bool_like(const RPtr& t) {
  return t->tag == RType::Tag::Sum && is_unit_refbase(t->t1) && is_unit_refbase(t->t2);
}

}  // namespace

void subtype(const Context& ctx, const RPtr& a, const RPtr& b, const InstanceDescriptor& inst,
             const std::string& rule, Span span, std::vector<Obligation>& out) {
  if (!stype_equal(erase(a), erase(b)))
    err("subtyping between different underlying types: " + stype_to_string(erase(a)) + " vs " +
            stype_to_string(erase(b)),
        span);
  switch (a->tag) {
    case RType::Tag::RefBase: {
      std::string z = fresh_name(a->binder);
      FPtr lhs = subst(a->fml, a->binder, v_var(z));
      FPtr rhs = subst(b->fml, b->binder, v_var(z));
      // phi => phi and phi => top are trivially valid; skip the obligation
      if (alpha_equal(lhs, rhs)) return;
      if (rhs->tag == Fml::Tag::True) return;
      emit_implication(out, ctx, rule, span, z, a->base, lhs, rhs);
      return;
    }
    case RType::Tag::Sum:
      subtype(ctx, a->t1, b->t1, inst, rule, span, out);
      subtype(ctx, a->t2, b->t2, inst, rule, span, out);
      return;
    case RType::Tag::DPair: {
      subtype(ctx, a->t1, b->t1, inst, rule, span, out);
      std::string x = fresh_name(a->binder);
      Context c2 = ctx;
      c2.push_back({x, a->t1});
      subtype(c2, subst(a->t2, a->binder, v_var(x)), subst(b->t2, b->binder, v_var(x)), inst, rule, span, out);
      return;
    }
    case RType::Tag::DFun: {
      subtype(ctx, b->t1, a->t1, inst, rule, span, out);  // contravariant domain
      std::string x = fresh_name(b->binder);
      Context c2 = ctx;
      c2.push_back({x, b->t1});
      subtype_comp(c2, subst(a->ct, a->binder, v_var(x)), subst(b->ct, b->binder, v_var(x)), inst, rule, span,
                   out);
      return;
    }
  }
}

void subtype_comp(const Context& ctx, const CTyPtr& a, const CTyPtr& b, const InstanceDescriptor& inst,
                  const std::string& rule, Span span, std::vector<Obligation>& out) {
  if (!alpha_equal(a->grade, b->grade)) emit_subeffect(out, ctx, rule, span, a->grade, b->grade);
  subtype(ctx, a->val, b->val, inst, rule, span, out);
}

// --- refinement layer helpers ------------------------------------------------------

namespace {

RPtr selfify(const Context& ctx, const std::string& name, const RPtr& t) {
  if (t->tag == RType::Tag::RefBase) {
    std::string z = fresh_name(t->binder);
    return r_refbase(z, t->base, f_atom("=", v_pair(v_var(z), v_var(name))));
  }
  if (is_bool_like(t)) {
    // VT-VarSelf extended to bool = unit + unit
    std::string u1 = fresh_name("t"), u2 = fresh_name("f");
    return r_sum(r_refbase(u1, BaseTy::Unit, f_atom("=", v_pair(v_var(name), v_true()))),
                 r_refbase(u2, BaseTy::Unit, f_atom("=", v_pair(v_var(name), v_false()))));
  }
  return t;
}

// Substitute the signature binder by an actual (ground) argument.
template <typename T>
T sig_subst(const T& tpl, const std::string& binder, const VPtr& arg, Span sp) {
  if (!is_ground_term(arg)) err("argument must be a ground value term here", sp);
  return subst(tpl, binder, arg);
}

const OpSig* resolve_op(const Context& ctx, const InstanceDescriptor& inst, const VPtr& v) {
  SEnv env = erased_env(ctx);
  auto overloads = inst.sigs.op_overloads(v->name);
  std::string last;
  for (const OpSig* sig : overloads) {
    try {
      scheck_v(env, inst.sigs, v->v1, erase(sig->ref_arg));
      return sig;
    } catch (const TypeError& e) {
      last = e.what();
    }
  }
  err("no overload of " + v->name + " matches: " + last, v->span);
}

struct SynthComp {
  EPtr grade;
  RPtr val;
};

SynthComp synth_comp(const Context& ctx, const CPtr& c, const InstanceDescriptor& inst,
                     std::vector<Obligation>& out);

void check_let_tail(const Context& ctx, const EPtr& acc, const CPtr& c, const CTyPtr& target,
                    const InstanceDescriptor& inst, std::vector<Obligation>& out);

// Refines the scrutinee-dependent parts when casing on a boolean variable.
RPtr refine_case_branch(const RPtr& comp, const VPtr& scrut, bool left) {
  if (comp->tag != RType::Tag::RefBase) return comp;
  if (scrut->tag != VTerm::Tag::Var) return comp;
  FPtr eq = f_atom("=", v_pair(scrut, left ? v_true() : v_false()));
  return r_refbase(comp->binder, comp->base, f_and(comp->fml, eq));
}

}  // namespace

RPtr infer_value(const Context& ctx, const VPtr& v, const InstanceDescriptor& inst, std::vector<Obligation>& out) {
  switch (v->tag) {
    case VTerm::Tag::Var: {
      auto t = ctx_lookup(ctx, v->name);
      if (!t) err("unbound variable " + display_name(v->name), v->span);
      return selfify(ctx, v->name, *t);
    }
    case VTerm::Tag::Unit: return r_refbase(fresh_name("u"), BaseTy::Unit, f_true());
    case VTerm::Tag::Lit: {
      std::string z = fresh_name("z");
      BaseTy b = v->lit_is_real ? BaseTy::Real : BaseTy::Int;
      return r_refbase(z, b, f_atom("=", v_pair(v_var(z), v)));
    }
    case VTerm::Tag::EventLit: return r_base(BaseTy::Event);
    case VTerm::Tag::Pair: {
      RPtr a = infer_value(ctx, v->v1, inst, out);
      RPtr b = infer_value(ctx, v->v2, inst, out);
      return r_dpair(fresh_name("p"), a, b);
    }
    case VTerm::Tag::Ascribe: {
      wf(ctx, v->ascribed, inst);
      check_value(ctx, v->v1, v->ascribed, inst, out);
      return v->ascribed;
    }
    case VTerm::Tag::Proj1:
    case VTerm::Tag::Proj2: err("projections are only available inside formulas and effects", v->span);
    case VTerm::Tag::Inl:
    case VTerm::Tag::Inr: err("sum injection needs a checked type; add an annotation", v->span);
    case VTerm::Tag::Lam:
    case VTerm::Tag::RecFun: err("function term needs a checked type; add an annotation", v->span);
    case VTerm::Tag::OpApp: break;
  }
  if (v->name == "not") {
    // predicate-swapping signature on sums (used for bool)
    RPtr t = infer_value(ctx, v->v1, inst, out);
    if (t->tag != RType::Tag::Sum) err("not expects a boolean", v->span);
    return r_sum(t->t2, t->t1);
  }
  if (v->name == "ite") err("if-terms are only available inside formulas and effects", v->span);
  const OpSig* sig = resolve_op(ctx, inst, v);
  check_value(ctx, v->v1, sig->ref_arg, inst, out);
  return sig_subst(sig->ref_res, sig->binder, v->v1, v->span);
}

void check_value(const Context& ctx, const VPtr& v, const RPtr& t, const InstanceDescriptor& inst,
                 std::vector<Obligation>& out) {
  switch (v->tag) {
    case VTerm::Tag::Lam: {
      if (t->tag != RType::Tag::DFun) err("function used at non-function type", v->span);
      Context c2 = ctx;
      c2.push_back({v->binder, t->t1});
      check_comp(c2, v->body, subst(t->ct, t->binder, v_var(v->binder)), inst, out);
      return;
    }
    case VTerm::Tag::RecFun: {
      if (t->tag != RType::Tag::DFun) err("recursive function used at non-function type", v->span);
      Context c2 = ctx;
      c2.push_back({v->name, t});
      c2.push_back({v->binder, t->t1});
      check_comp(c2, v->body, subst(t->ct, t->binder, v_var(v->binder)), inst, out);
      return;
    }
    case VTerm::Tag::Inl: {
      if (t->tag != RType::Tag::Sum) err("inl used at non-sum type", v->span);
      check_value(ctx, v->v1, t->t1, inst, out);
      return;
    }
    case VTerm::Tag::Inr: {
      if (t->tag != RType::Tag::Sum) err("inr used at non-sum type", v->span);
      check_value(ctx, v->v1, t->t2, inst, out);
      return;
    }
    case VTerm::Tag::Pair: {
      if (t->tag != RType::Tag::DPair) err("pair used at non-pair type", v->span);
      check_value(ctx, v->v1, t->t1, inst, out);
      RPtr second = occurs_free(t->binder, t->t2) ? sig_subst(t->t2, t->binder, v->v1, v->span) : t->t2;
      check_value(ctx, v->v2, second, inst, out);
      return;
    }
    default: {
      RPtr got = infer_value(ctx, v, inst, out);
      subtype(ctx, got, t, inst, "VT-Sub", v->span, out);
      return;
    }
  }
}

namespace {

SynthComp synth_comp(const Context& ctx, const CPtr& c, const InstanceDescriptor& inst,
                     std::vector<Obligation>& out) {
  switch (c->tag) {
    case CTerm::Tag::Return: return {e_unit(), infer_value(ctx, c->v1, inst, out)};
    case CTerm::Tag::App: {
      RPtr f = infer_value(ctx, c->v1, inst, out);
      if (f->tag != RType::Tag::DFun) err("application of a non-function", c->span);
      check_value(ctx, c->v2, f->t1, inst, out);
      bool dep = occurs_free(f->binder, f->ct);
      CTyPtr res = dep ? sig_subst(f->ct, f->binder, c->v2, c->span) : f->ct;
      return {res->grade, res->val};
    }
    case CTerm::Tag::GenEff: {
      const GefSig* g = inst.sigs.geneff(c->name);
      if (!g) err("unknown generic effect " + c->name, c->span);
      if (inst.kind == Instance::Expect && c->name == "Bern")
        err("Bern needs an ascribed target type in the expectation instance", c->span);
      if (c->ghosts.size() != g->ghosts.size()) err("ghost argument arity mismatch for " + c->name, c->span);
      if (c->name == "Emit") {
        if (c->v1->tag != VTerm::Tag::EventLit) err("Emit expects a literal event", c->span);
        return {e_basic(c->v1->is_push ? "push" : "pop", v_unit()), r_base(BaseTy::Unit)};
      }
      check_value(ctx, c->v1, g->ref_arg, inst, out);
      EPtr grade = g->grade;
      RPtr res = g->ref_res;
      for (size_t i = 0; i < c->ghosts.size(); ++i) {
        check_value(ctx, c->ghosts[i], g->ghosts[i].second, inst, out);
        grade = sig_subst(grade, g->ghosts[i].first, c->ghosts[i], c->span);
        res = sig_subst(res, g->ghosts[i].first, c->ghosts[i], c->span);
      }
      grade = sig_subst(grade, g->binder, c->v1, c->span);
      res = sig_subst(res, g->binder, c->v1, c->span);
      return {grade, res};
    }
    case CTerm::Tag::Ascribe: {
      wf(ctx, c->ascribed, inst);
      check_comp(ctx, c->c1, c->ascribed, inst, out);
      return {c->ascribed->grade, c->ascribed->val};
    }
    case CTerm::Tag::Let: {
      if (c->let_grade) err("annotated let cannot be grade-synthesized here", c->span);
      SynthComp head = synth_comp(ctx, c->c1, inst, out);
      Context c2 = ctx;
      c2.push_back({c->name, head.val});
      SynthComp body = synth_comp(c2, c->c2, inst, out);
      if (occurs_free(c->name, body.grade))
        err("let-bound variable escapes into the synthesized grade; annotate with in[...]", c->span);
      if (occurs_free(c->name, body.val))
        err("let-bound variable escapes into the synthesized result type; add an ascription", c->span);
      return {e_mul(head.grade, body.grade), body.val};
    }
    case CTerm::Tag::MatchPair:
    case CTerm::Tag::Case: err("grade synthesis for case/match is not supported; add an ascription", c->span);
  }
  err("bad computation", c->span);
}

void check_let_tail(const Context& ctx, const EPtr& acc, const CPtr& c, const CTyPtr& target,
                    const InstanceDescriptor& inst, std::vector<Obligation>& out) {
  switch (c->tag) {
    case CTerm::Tag::Let: {
      if (c->let_grade) {
        // declared continuation grade: acc * E1 * E2 <= target, rest vs E2
        wf_effect(ctx, c->let_grade, inst);
        SynthComp head = synth_comp(ctx, c->c1, inst, out);
        if (occurs_free(c->name, c->let_grade))
          err("let-bound variable " + display_name(c->name) + " occurs in its continuation grade (CT-Let)",
              c->span);
        Context c2 = ctx;
        c2.push_back({c->name, head.val});
        check_comp(c2, c->c2, c_type(c->let_grade, target->val), inst, out);
        emit_subeffect(out, ctx, "CT-Let", c->span, e_mul(acc, e_mul(head.grade, c->let_grade)), target->grade);
        return;
      }
      SynthComp head = synth_comp(ctx, c->c1, inst, out);
      Context c2 = ctx;
      c2.push_back({c->name, head.val});
      check_let_tail(c2, e_mul(acc, head.grade), c->c2, target, inst, out);
      return;
    }
    case CTerm::Tag::Case: {
      RPtr s = infer_value(ctx, c->v1, inst, out);
      if (s->tag != RType::Tag::Sum) err("case scrutinee must have sum type", c->span);
      CTyPtr tl = target, tr = target;
      if (c->v1->tag == VTerm::Tag::Var) {
        tl = subst(target, c->v1->name, v_inl(v_var(c->x)));
        tr = subst(target, c->v1->name, v_inr(v_var(c->y)));
      }
      Context cl = ctx;
      cl.push_back({c->x, refine_case_branch(s->t1, c->v1, true)});
      check_let_tail(cl, acc, c->c1, tl, inst, out);
      Context cr = ctx;
      cr.push_back({c->y, refine_case_branch(s->t2, c->v1, false)});
      check_let_tail(cr, acc, c->c2, tr, inst, out);
      return;
    }
    case CTerm::Tag::MatchPair: {
      RPtr s = infer_value(ctx, c->v1, inst, out);
      if (s->tag != RType::Tag::DPair) err("match scrutinee must have pair type", c->span);
      Context c2 = ctx;
      c2.push_back({c->x, s->t1});
      c2.push_back({c->y, subst(s->t2, s->binder, v_var(c->x))});
      CTyPtr t2 = target;
      if (c->v1->tag == VTerm::Tag::Var) t2 = subst(target, c->v1->name, v_pair(v_var(c->x), v_var(c->y)));
      check_let_tail(c2, acc, c->c1, t2, inst, out);
      return;
    }
    default: {
      SynthComp tail = synth_comp(ctx, c, inst, out);
      subtype(ctx, tail.val, target->val, inst, "CT-Sub", c->span, out);
      emit_subeffect(out, ctx, "CT-Let", c->span, e_mul(acc, tail.grade), target->grade);
      return;
    }
  }
}

// The expectation-instance hook for Bern: against a target
// T_e ({t:unit|A} + {f:unit|B}), the argument's predicate C must dominate
// <0 <= p <= 1> /\op (p*A + (1-p)*B - e) pointwise.
void check_bern_expect(const Context& ctx, const CPtr& c, const CTyPtr& target, const InstanceDescriptor& inst,
                       std::vector<Obligation>& out) {
  const RPtr& tv = target->val;
  if (!(tv->tag == RType::Tag::Sum && is_unit_refbase(tv->t1) && is_unit_refbase(tv->t2)))
    err("Bern must be checked against {t:unit|A} + {f:unit|B}", c->span);
  RPtr arg_t = infer_value(ctx, c->v1, inst, out);
  if (arg_t->tag != RType::Tag::RefBase || arg_t->base != BaseTy::Real)
    err("Bern expects a real argument", c->span);
  std::string p = fresh_name("p");
  FPtr carg = subst(arg_t->fml, arg_t->binder, v_var(p));
  FPtr a_post = subst(tv->t1->fml, tv->t1->binder, v_unit());
  FPtr b_post = subst(tv->t2->fml, tv->t2->binder, v_unit());
  FPtr e = effect_as_extreal_formula(target->grade);
  FPtr range = f_embed(f_and(f_atom("<=", v_pair(v_lit(Rat(0), true), v_var(p))),
                             f_atom("<=", v_pair(v_var(p), v_lit(Rat(1), true)))));
  FPtr expectation = f_sub(f_add(f_mul(f_num(v_var(p)), a_post),
                                 f_mul(f_sub(f_num(v_lit(Rat(1), true)), f_num(v_var(p))), b_post)),
                           e);
  emit_implication(out, ctx, "CT-Bern", c->span, p, BaseTy::Real, carg, f_and(range, expectation));
}

}  // namespace

void check_comp(const Context& ctx, const CPtr& c, const CTyPtr& target, const InstanceDescriptor& inst,
                std::vector<Obligation>& out) {
  switch (c->tag) {
    case CTerm::Tag::Return: {
      check_value(ctx, c->v1, target->val, inst, out);
      emit_subeffect(out, ctx, "CT-Ret", c->span, e_unit(), target->grade);
      return;
    }
    case CTerm::Tag::Ascribe: {
      wf(ctx, c->ascribed, inst);
      check_comp(ctx, c->c1, c->ascribed, inst, out);
      subtype_comp(ctx, c->ascribed, target, inst, "CT-Sub", c->span, out);
      return;
    }
    case CTerm::Tag::GenEff:
      if (inst.kind == Instance::Expect && c->name == "Bern") {
        check_bern_expect(ctx, c, target, inst, out);
        return;
      }
      [[fallthrough]];
    case CTerm::Tag::App: {
      SynthComp got = synth_comp(ctx, c, inst, out);
      subtype_comp(ctx, c_type(got.grade, got.val), target, inst,
                   c->tag == CTerm::Tag::App ? "CT-App" : "CT-GenEff", c->span, out);
      return;
    }
    case CTerm::Tag::Let: {
      if (c->let_grade) {
        check_let_tail(ctx, e_unit(), c, target, inst, out);
        return;
      }
      // right-factor heuristic: a syntactically multiplicative target splits
      if (target->grade->tag == Eff::Tag::Mul) {
        SynthComp head = synth_comp(ctx, c->c1, inst, out);
        emit_subeffect(out, ctx, "CT-Let", c->span, head.grade, target->grade->e1);
        Context c2 = ctx;
        c2.push_back({c->name, head.val});
        check_comp(c2, c->c2, c_type(target->grade->e2, target->val), inst, out);
        return;
      }
      check_let_tail(ctx, e_unit(), c, target, inst, out);
      return;
    }
    case CTerm::Tag::Case:
    case CTerm::Tag::MatchPair: {
      check_let_tail(ctx, e_unit(), c, target, inst, out);
      return;
    }
  }
}

// --- whole-program checking ----------------------------------------------------------

TypedProgram check_program(const Program& p) {
  const InstanceDescriptor& inst = instance_descriptor(p.instance);
  g_obligation_id = 0;
  TypedProgram tp;
  tp.instance = p.instance;
  tp.source_name = p.source_name;

  Context ctx;
  for (const Decl& d : p.decls) {
    if (d.is_computation) {
      if (!d.ctype) err("computation declaration without a type", d.span);
      wf(ctx, d.ctype, inst);
      if (d.cbody) {
        STy want = erase_comp(d.ctype);
        SEnv env = erased_env(ctx);
        scheck_c(env, inst.sigs, d.cbody, want);
        check_comp(ctx, d.cbody, d.ctype, inst, tp.obligations);
      }
      tp.decls.push_back({d.name, true, nullptr, d.ctype, nullptr, d.cbody});
      continue;
    }
    if (!d.vtype) err("value declaration without a type", d.span);
    wf(ctx, d.vtype, inst);
    if (d.vbody) {
      SEnv env = erased_env(ctx);
      scheck_v(env, inst.sigs, d.vbody, erase(d.vtype));
      check_value(ctx, d.vbody, d.vtype, inst, tp.obligations);
    }
    ctx.push_back({d.name, d.vtype});
    tp.decls.push_back({d.name, false, d.vtype, nullptr, d.vbody, nullptr});
  }
  tp.toplevel = ctx;
  return tp;
}

}  // namespace grady
