#include "grady/constraints.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "grady/pretty.hpp"

namespace grady {

namespace {

// ---- grids ---------------------------------------------------------------------

struct GridConfig {
  long int_bound;
  long real_bound;
  long real_density;
  long list_len;
  std::vector<Rat> list_elems;
  std::vector<Rat> int_consts;
  std::vector<Rat> real_consts;
};

void collect_lits(const VPtr& v, std::vector<Rat>& ints, std::vector<Rat>& reals) {
  if (!v) return;
  if (v->tag == VTerm::Tag::Lit) {
    (denominator(v->lit) == 1 && !v->lit_is_real ? ints : reals).push_back(v->lit);
    reals.push_back(v->lit);
    return;
  }
  collect_lits(v->v1, ints, reals);
  collect_lits(v->v2, ints, reals);
  if (v->body) {
    // literals under binders still matter for the grid
  }
}

void collect_lits(const FPtr& f, std::vector<Rat>& ints, std::vector<Rat>& reals) {
  if (!f) return;
  collect_lits(f->arg, ints, reals);
  collect_lits(f->f1, ints, reals);
  collect_lits(f->f2, ints, reals);
}

void collect_lits(const EPtr& e, std::vector<Rat>& ints, std::vector<Rat>& reals) {
  if (!e) return;
  collect_lits(e->arg, ints, reals);
  collect_lits(e->e1, ints, reals);
  collect_lits(e->e2, ints, reals);
}

void collect_lits(const RPtr& t, std::vector<Rat>& ints, std::vector<Rat>& reals) {
  if (!t) return;
  collect_lits(t->fml, ints, reals);
  collect_lits(t->t1, ints, reals);
  collect_lits(t->t2, ints, reals);
  if (t->ct) {
    collect_lits(t->ct->grade, ints, reals);
    collect_lits(t->ct->val, ints, reals);
  }
}

std::vector<RtPtr> grid_base(BaseTy b, const GridConfig& g) {
  std::vector<RtPtr> out;
  switch (b) {
    case BaseTy::Unit: out.push_back(rt_unit()); break;
    case BaseTy::Event:
      out.push_back(rt_event(true));
      out.push_back(rt_event(false));
      break;
    case BaseTy::Int: {
      std::vector<Rat> vals;
      for (long k = -g.int_bound; k <= g.int_bound; ++k) vals.push_back(Rat(k));
      for (auto& c : g.int_consts)
        if (denominator(c) == 1 && rat_abs(c) > g.int_bound) vals.push_back(c);
      std::sort(vals.begin(), vals.end());
      vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
      for (auto& v : vals) out.push_back(rt_rat(v));
      break;
    }
    case BaseTy::Real: {
      std::vector<Rat> vals;
      for (long k = -g.real_bound * g.real_density; k <= g.real_bound * g.real_density; ++k)
        vals.push_back(Rat(k, g.real_density));
      for (auto& c : g.real_consts) vals.push_back(c);
      std::sort(vals.begin(), vals.end());
      vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
      for (auto& v : vals) out.push_back(rt_rat(v));
      break;
    }
    case BaseTy::List: {
      std::vector<std::vector<RtPtr>> layer{{}};
      for (auto& w : layer) out.push_back(rt_list(w));
      for (long len = 1; len <= g.list_len; ++len) {
        std::vector<std::vector<RtPtr>> next;
        for (auto& w : layer)
          for (auto& e : g.list_elems) {
            auto w2 = w;
            w2.push_back(rt_rat(e));
            next.push_back(w2);
          }
        for (auto& w : next) out.push_back(rt_list(w));
        layer = std::move(next);
      }
      break;
    }
    case BaseTy::ListList: {
      GridConfig g2 = g;
      std::vector<RtPtr> inner = grid_base(BaseTy::List, g2);
      std::vector<std::vector<RtPtr>> layer{{}};
      for (auto& w : layer) out.push_back(rt_list(w));
      for (long len = 1; len <= g.list_len; ++len) {
        std::vector<std::vector<RtPtr>> next;
        for (auto& w : layer)
          for (auto& e : inner) {
            auto w2 = w;
            w2.push_back(e);
            next.push_back(w2);
          }
        for (auto& w : next) out.push_back(rt_list(w));
        layer = std::move(next);
      }
      break;
    }
  }
  return out;
}

// Candidate values for a context entry, by erased structure. Function-typed
// entries yield no candidates (their predicates cannot be referenced by
// ground payloads, so they are skipped during enumeration).
std::optional<std::vector<RtPtr>> grid_values(const RPtr& t, const GridConfig& g) {
  switch (t->tag) {
    case RType::Tag::RefBase: return grid_base(t->base, g);
    case RType::Tag::Sum: {
      auto l = grid_values(t->t1, g), r = grid_values(t->t2, g);
      if (!l || !r) return std::nullopt;
      std::vector<RtPtr> out;
      for (auto& v : *l) out.push_back(rt_sum(true, v));
      for (auto& v : *r) out.push_back(rt_sum(false, v));
      return out;
    }
    case RType::Tag::DPair: {
      auto l = grid_values(t->t1, g), r = grid_values(t->t2, g);
      if (!l || !r) return std::nullopt;
      std::vector<RtPtr> out;
      for (auto& a : *l)
        for (auto& b : *r) out.push_back(rt_pair(a, b));
      return out;
    }
    case RType::Tag::DFun: return std::nullopt;
  }
  return std::nullopt;
}

// ---- predicate evaluation over context entries ------------------------------------

bool entry_holds_bool(const RPtr& t, const RtPtr& v, const Env& env) { return refinement_holds(t, v, env); }
NumVal entry_value_extreal(const RPtr& t, const RtPtr& v, const Env& env) {
  return refinement_value_extreal(t, v, env);
}

struct Enumerator {
  const Obligation& ob;
  const InstanceDescriptor& inst;
  GridConfig grid;
  bool expect;
  bool unknown_seen = false;
  std::string unknown_reason;
  std::optional<CexEnv> cex;

  // entries to enumerate, in context order, ending with the payload binder
  struct Slot {
    std::string name;
    RPtr type;
    std::vector<RtPtr> values;  // empty for skipped (function) entries
    bool skipped = false;
  };
  std::vector<Slot> slots;

  bool payload_violated(Env env, const NumVal& ctx_extreal) {
    if (ob.kind == Obligation::Kind::Subeffect) {
      GradeValue a = eval_effect(ob.e1, env, inst);
      GradeValue b = eval_effect(ob.e2, env, inst);
      Cmp3 c = mcompare(inst, a, b);
      if (c == Cmp3::Unknown) throw EvalError("grade order undecided: " + a.to_string() + " vs " + b.to_string());
      return c == Cmp3::False;
    }
    if (!expect) {
      if (!eval_fml_bool(ob.lhs, env)) return false;
      return !eval_fml_bool(ob.rhs, env);
    }
    // max{context, lhs} >= rhs pointwise in [0, inf]
    NumVal lhs = num_max(ctx_extreal, eval_fml_extreal(ob.lhs, env));
    if (lhs.is_infinite()) return false;
    NumVal rhs = eval_fml_extreal(ob.rhs, env);
    Cmp3 c = num_le(rhs, lhs);
    if (c == Cmp3::Unknown) throw EvalError("extended-real comparison undecided");
    return c == Cmp3::False;
  }

  void walk(size_t i, Env env, CexEnv& assigned, const NumVal& ctx_extreal) {
    if (cex) return;
    if (i == slots.size()) {
      try {
        if (payload_violated(env, ctx_extreal)) cex = assigned;
      } catch (const EvalError& e) {
        unknown_seen = true;
        unknown_reason = e.what();
      }
      return;
    }
    Slot& s = slots[i];
    if (s.skipped) {
      walk(i + 1, env, assigned, ctx_extreal);
      return;
    }
    for (const RtPtr& v : s.values) {
      if (cex) return;
      Env env2 = env_bind(env, s.name, v);
      NumVal ctx2 = ctx_extreal;
      try {
        if (!expect) {
          if (!entry_holds_bool(s.type, v, env)) continue;  // env outside the context predicate
        } else {
          ctx2 = num_max(ctx2, entry_value_extreal(s.type, v, env));
          if (ctx2.is_infinite()) continue;  // context bottom: trivially satisfied
        }
      } catch (const EvalError& e) {
        unknown_seen = true;
        unknown_reason = e.what();
        continue;
      }
      assigned.emplace_back(s.name, v);
      walk(i + 1, env2, assigned, ctx2);
      assigned.pop_back();
    }
  }
};

GridConfig make_grid(const Obligation& ob, const DomainBounds& b, long real_bound, long real_density) {
  GridConfig g;
  g.int_bound = b.int_bound;
  g.real_bound = real_bound;
  g.real_density = real_density;
  g.list_len = b.list_len;
  g.list_elems = b.list_elems;
  std::vector<Rat> ints, reals;
  for (auto& e : ob.ctx) collect_lits(e.type, ints, reals);
  collect_lits(ob.lhs, ints, reals);
  collect_lits(ob.rhs, ints, reals);
  collect_lits(ob.e1, ints, reals);
  collect_lits(ob.e2, ints, reals);
  g.int_consts = ints;
  g.real_consts = reals;
  return g;
}

}  // namespace

DischargeResult discharge_bounded(const Obligation& ob, const DomainBounds& bounds, const InstanceDescriptor& inst) {
  DischargeResult res;
  // Deterministic coarsening ladder for real grids: density halves first,
  // then the range, until the raw product fits the enumeration guard.
  std::vector<std::pair<long, long>> ladder;
  for (long q = bounds.real_density; q >= 1; q /= 2) ladder.emplace_back(bounds.int_bound, q);
  for (long b = bounds.int_bound / 2; b >= 1; b /= 2)
    for (long q = std::min<long>(bounds.real_density, 2); q >= 1; q /= 2) ladder.emplace_back(b, q);

  for (auto [rb, rq] : ladder) {
    GridConfig g = make_grid(ob, bounds, rb, rq);
    Enumerator en{ob, inst, g, inst.kind == Instance::Expect};
    long long product = 1;
    bool overflow = false;
    for (auto& e : ob.ctx) {
      auto vals = grid_values(e.type, g);
      Enumerator::Slot s;
      s.name = e.name;
      s.type = e.type;
      if (!vals) {
        s.skipped = true;
      } else {
        s.values = std::move(*vals);
        product *= static_cast<long long>(s.values.size());
        if (product > bounds.env_guard) {
          overflow = true;
          break;
        }
      }
      en.slots.push_back(std::move(s));
    }
    if (!overflow && ob.kind == Obligation::Kind::Implication && ob.has_binder) {
      Enumerator::Slot s;
      s.name = ob.binder;
      s.type = r_refbase(ob.binder, ob.binder_base, f_true());
      s.values = grid_base(ob.binder_base, g);
      product *= static_cast<long long>(s.values.size());
      if (product > bounds.env_guard) overflow = true;
      en.slots.push_back(std::move(s));
    }
    if (overflow) continue;

    std::ostringstream method;
    method << "grid(B=" << bounds.int_bound << ",q=" << bounds.real_density;
    if (rb != bounds.int_bound || rq != bounds.real_density) method << ";reals:B=" << rb << ",q=" << rq;
    method << ")";
    res.method = method.str();

    CexEnv assigned;
    en.walk(0, nullptr, assigned, NumVal(Rat(0)));
    if (en.cex) {
      res.kind = DischargeResult::Kind::Counterexample;
      res.cex = *en.cex;
      return res;
    }
    if (en.unknown_seen) {
      res.kind = DischargeResult::Kind::Unknown;
      res.reason = en.unknown_reason;
      return res;
    }
    res.kind = DischargeResult::Kind::Valid;
    return res;
  }
  res.kind = DischargeResult::Kind::Unknown;
  res.reason = "grid explosion: context too large for the enumeration guard";
  return res;
}

// ---- randomized falsification ---------------------------------------------------

namespace {

struct RandomSource {
  std::mt19937_64 rng;
  explicit RandomSource(unsigned long long seed) : rng(seed) {}
  long pick(long lo, long hi) {  // inclusive
    unsigned long long span = static_cast<unsigned long long>(hi - lo) + 1;
    return lo + static_cast<long>(rng() % span);
  }
  Rat random_rat(bool integral) {
    long mag = pick(0, 10);
    long num = pick(-(1L << mag), 1L << mag);
    if (integral) return Rat(num);
    long den = pick(1, 16);
    return Rat(num, den);
  }
  RtPtr random_value(const RPtr& t) {
    switch (t->tag) {
      case RType::Tag::RefBase:
        switch (t->base) {
          case BaseTy::Unit: return rt_unit();
          case BaseTy::Int: return rt_rat(random_rat(true));
          case BaseTy::Real: return rt_rat(random_rat(false));
          case BaseTy::Event: return rt_event(pick(0, 1) == 1);
          case BaseTy::List: {
            std::vector<RtPtr> items;
            long n = pick(0, 4);
            for (long i = 0; i < n; ++i) items.push_back(rt_rat(random_rat(false)));
            return rt_list(std::move(items));
          }
          case BaseTy::ListList: {
            std::vector<RtPtr> items;
            long n = pick(0, 3);
            for (long i = 0; i < n; ++i) {
              std::vector<RtPtr> inner;
              long m = pick(0, 3);
              for (long j = 0; j < m; ++j) inner.push_back(rt_rat(random_rat(false)));
              items.push_back(rt_list(std::move(inner)));
            }
            return rt_list(std::move(items));
          }
        }
        return rt_unit();
      case RType::Tag::Sum: {
        bool left = pick(0, 1) == 1;
        return rt_sum(left, random_value(left ? t->t1 : t->t2));
      }
      case RType::Tag::DPair: return rt_pair(random_value(t->t1), random_value(t->t2));
      case RType::Tag::DFun: return nullptr;
    }
    return nullptr;
  }
};

}  // namespace

FalsifyResult falsify_sampling(const Obligation& ob, long trials, unsigned long long seed,
                               const InstanceDescriptor& inst) {
  RandomSource rs(seed);
  bool expect = inst.kind == Instance::Expect;
  for (long trial = 0; trial < trials; ++trial) {
    Env env;
    CexEnv assigned;
    NumVal ctxv(Rat(0));
    bool ok = true;
    try {
      for (auto& e : ob.ctx) {
        RtPtr v = rs.random_value(e.type);
        if (!v) continue;  // function-typed entry
        if (!expect) {
          if (!entry_holds_bool(e.type, v, env)) {
            ok = false;
            break;
          }
        } else {
          ctxv = num_max(ctxv, entry_value_extreal(e.type, v, env));
          if (ctxv.is_infinite()) {
            ok = false;
            break;
          }
        }
        env = env_bind(env, e.name, v);
        assigned.emplace_back(e.name, v);
      }
      if (!ok) continue;
      if (ob.kind == Obligation::Kind::Implication && ob.has_binder) {
        RPtr bt = r_refbase(ob.binder, ob.binder_base, f_true());
        RtPtr v = rs.random_value(bt);
        env = env_bind(env, ob.binder, v);
        assigned.emplace_back(ob.binder, v);
      }
      bool violated;
      if (ob.kind == Obligation::Kind::Subeffect) {
        GradeValue a = eval_effect(ob.e1, env, inst);
        GradeValue b = eval_effect(ob.e2, env, inst);
        Cmp3 c = mcompare(inst, a, b);
        violated = c == Cmp3::False;
      } else if (!expect) {
        violated = eval_fml_bool(ob.lhs, env) && !eval_fml_bool(ob.rhs, env);
      } else {
        NumVal lhs = num_max(ctxv, eval_fml_extreal(ob.lhs, env));
        violated = !lhs.is_infinite() && num_le(eval_fml_extreal(ob.rhs, env), lhs) == Cmp3::False;
      }
      if (violated) return {true, assigned};
    } catch (const EvalError&) {
      continue;
    }
  }
  return {false, {}};
}

bool confirm_counterexample(const Obligation& ob, const CexEnv& cex, const InstanceDescriptor& inst) {
  Env env;
  NumVal ctxv(Rat(0));
  bool expect = inst.kind == Instance::Expect;
  try {
    for (auto& [name, val] : cex) {
      RPtr t;
      if (ob.has_binder && name == ob.binder) {
        t = r_refbase(ob.binder, ob.binder_base, f_true());
      } else {
        auto found = ctx_lookup(ob.ctx, name);
        if (!found) return false;
        t = *found;
      }
      if (!expect) {
        if (!entry_holds_bool(t, val, env)) return false;
      } else {
        ctxv = num_max(ctxv, entry_value_extreal(t, val, env));
        if (ctxv.is_infinite()) return false;
      }
      env = env_bind(env, name, val);
    }
    if (ob.kind == Obligation::Kind::Subeffect) {
      GradeValue a = eval_effect(ob.e1, env, inst);
      GradeValue b = eval_effect(ob.e2, env, inst);
      return mcompare(inst, a, b) == Cmp3::False;
    }
    if (!expect) return eval_fml_bool(ob.lhs, env) && !eval_fml_bool(ob.rhs, env);
    NumVal lhs = num_max(ctxv, eval_fml_extreal(ob.lhs, env));
    return !lhs.is_infinite() && num_le(eval_fml_extreal(ob.rhs, env), lhs) == Cmp3::False;
  } catch (const EvalError&) {
    return false;
  }
}

// ---- SMT-LIB2 emission ------------------------------------------------------------

namespace {

struct SmtEmitter {
  const InstanceDescriptor& inst;
  std::ostringstream decls;
  std::ostringstream asserts;
  bool needs_exp = false;
  std::set<std::string> declared;
  std::string failure;

  [[noreturn]] void give_up(const std::string& why) { throw EvalError(why); }

  std::string sort_of(BaseTy b) {
    switch (b) {
      case BaseTy::Int: return "Int";
      case BaseTy::Real: return "Real";
      default: give_up(std::string("unsupported sort ") + base_name(b));
    }
  }

  std::string sid(const std::string& name) {
    std::string out = "|" + name + "|";
    return out;
  }

  void declare(const std::string& name, const std::string& sort) {
    if (declared.insert(name).second)
      decls << "(declare-const " << sid(name) << " " << sort << ")\n";
  }

  std::string term(const VPtr& v) {
    switch (v->tag) {
      case VTerm::Tag::Var: return sid(v->name);
      case VTerm::Tag::Lit: {
        Rat r = v->lit;
        bool neg = r < 0;
        Rat a = rat_abs(r);
        std::string core;
        if (denominator(a) == 1 && !v->lit_is_real) {
          core = rat_to_string(a);
        } else {
          core = "(/ " + BigInt(numerator(a)).str() + ".0 " + BigInt(denominator(a)).str() + ".0)";
        }
        return neg ? "(- " + core + ")" : core;
      }
      case VTerm::Tag::OpApp: break;
      default: give_up("unsupported term construct");
    }
    const std::string& op = v->name;
    auto bin = [&](const std::string& smt) {
      return "(" + smt + " " + term(v->v1->v1) + " " + term(v->v1->v2) + ")";
    };
    if (op == "+") return bin("+");
    if (op == "-") return bin("-");
    if (op == "*") return bin("*");
    if (op == "/") return bin("/");
    if (op == "neg") return "(- " + term(v->v1) + ")";
    if (op == "min") return "(ite (<= " + term(v->v1->v1) + " " + term(v->v1->v2) + ") " + term(v->v1->v1) + " " +
                             term(v->v1->v2) + ")";
    if (op == "max") return "(ite (<= " + term(v->v1->v1) + " " + term(v->v1->v2) + ") " + term(v->v1->v2) + " " +
                             term(v->v1->v1) + ")";
    if (op == "abs") {
      std::string t = term(v->v1);
      return "(ite (<= 0 " + t + ") " + t + " (- " + t + "))";
    }
    if (op == "exp") {
      needs_exp = true;
      return "(exp " + term(v->v1) + ")";
    }
    if (op == "ite") return "(ite " + bterm(v->v1->v1) + " " + term(v->v1->v2->v1) + " " + term(v->v1->v2->v2) + ")";
    give_up("unsupported operation " + op);
  }

  // boolean-sorted terms (bool-typed program values)
  std::string bterm(const VPtr& v) {
    if (v->tag == VTerm::Tag::Var) return sid(v->name);
    if (v->tag == VTerm::Tag::Inl && v->v1->tag == VTerm::Tag::Unit) return "true";
    if (v->tag == VTerm::Tag::Inr && v->v1->tag == VTerm::Tag::Unit) return "false";
    if (v->tag == VTerm::Tag::OpApp) {
      if (v->name == "not") return "(not " + bterm(v->v1) + ")";
      if (v->name == "&&") return "(and " + bterm(v->v1->v1) + " " + bterm(v->v1->v2) + ")";
      if (v->name == "||") return "(or " + bterm(v->v1->v1) + " " + bterm(v->v1->v2) + ")";
      if (v->name == "=" || v->name == "<=" || v->name == "<")
        return "(" + v->name + " " + term(v->v1->v1) + " " + term(v->v1->v2) + ")";
    }
    give_up("unsupported boolean term");
  }

  std::string fml(const FPtr& f) {
    switch (f->tag) {
      case Fml::Tag::True: return "true";
      case Fml::Tag::False: return "false";
      case Fml::Tag::And: return "(and " + fml(f->f1) + " " + fml(f->f2) + ")";
      case Fml::Tag::Or: return "(or " + fml(f->f1) + " " + fml(f->f2) + ")";
      case Fml::Tag::Implies: return "(=> " + fml(f->f1) + " " + fml(f->f2) + ")";
      case Fml::Tag::Atom: {
        if (f->pred == "=" || f->pred == "<=" || f->pred == "<") {
          // boolean equality needs Bool-sorted translation
          if (f->pred == "=" && looks_boolean(f->arg->v1)) {
            return "(= " + bterm(f->arg->v1) + " " + bterm(f->arg->v2) + ")";
          }
          return "(" + f->pred + " " + term(f->arg->v1) + " " + term(f->arg->v2) + ")";
        }
        give_up("uninterpreted predicate " + f->pred);
      }
      default: give_up("extended-real formula outside the SMT fragment");
    }
  }

  bool looks_boolean(const VPtr& v) {
    if (v->tag == VTerm::Tag::Inl || v->tag == VTerm::Tag::Inr) return true;
    if (v->tag == VTerm::Tag::OpApp)
      return v->name == "not" || v->name == "&&" || v->name == "||" || v->name == "=" || v->name == "<=" ||
             v->name == "<";
    if (v->tag == VTerm::Tag::Var && declared_bool.count(v->name)) return true;
    return false;
  }

  std::set<std::string> declared_bool;

  void declare_entry(const std::string& name, const RPtr& t) {
    switch (t->tag) {
      case RType::Tag::RefBase: {
        declare(name, sort_of(t->base));
        FPtr pred = subst(t->fml, t->binder, v_var(name));
        if (pred->tag != Fml::Tag::True) asserts << "(assert " << fml(pred) << ")\n";
        return;
      }
      case RType::Tag::Sum: {
        // bool = unit + unit becomes a Bool constant with per-branch predicates
        if (t->t1->tag == RType::Tag::RefBase && t->t1->base == BaseTy::Unit &&
            t->t2->tag == RType::Tag::RefBase && t->t2->base == BaseTy::Unit) {
          declared_bool.insert(name);
          declare(name, "Bool");
          FPtr l = subst(t->t1->fml, t->t1->binder, v_unit());
          FPtr r = subst(t->t2->fml, t->t2->binder, v_unit());
          if (l->tag != Fml::Tag::True || r->tag != Fml::Tag::True)
            asserts << "(assert (ite " << sid(name) << " " << fml(l) << " " << fml(r) << "))\n";
          return;
        }
        give_up("unsupported sum-typed context entry");
      }
      case RType::Tag::DFun: return;  // functions do not occur in payloads
      case RType::Tag::DPair: give_up("unsupported pair-typed context entry");
    }
  }
};

}  // namespace

std::optional<std::string> emit_smtlib(const Obligation& ob, const InstanceDescriptor& inst, std::string* why) {
  SmtEmitter em{inst};
  try {
    for (auto& e : ob.ctx) em.declare_entry(e.name, e.type);
    if (ob.kind == Obligation::Kind::Implication) {
      if (inst.kind == Instance::Expect) em.give_up("extended-real obligation outside the SMT fragment");
      if (ob.has_binder) em.declare(ob.binder, em.sort_of(ob.binder_base));
      em.asserts << "(assert " << em.fml(ob.lhs) << ")\n";
      em.asserts << "(assert (not " << em.fml(ob.rhs) << "))\n";
    } else {
      EPtr n1 = normalize_effect(ob.e1, inst);
      EPtr n2 = normalize_effect(ob.e2, inst);
      if (!n1 || !n2) em.give_up("effect does not normalize");
      if (inst.kind == Instance::Temporal) {
        // stack(d,m) order: equal net depth and bounded peak
        std::string d1 = em.term(n1->arg->v1), m1 = em.term(n1->arg->v2);
        std::string d2 = em.term(n2->arg->v1), m2 = em.term(n2->arg->v2);
        em.asserts << "(assert (not (and (= " << d1 << " " << d2 << ") (<= " << m1 << " " << m2 << "))))\n";
      } else {
        em.asserts << "(assert (not (<= " << em.term(n1->arg) << " " << em.term(n2->arg) << ")))\n";
      }
    }
  } catch (const EvalError& e) {
    if (why) *why = e.what();
    return std::nullopt;
  }
  std::ostringstream out;
  out << "(set-logic ALL)\n";
  out << "; obligation " << ob.id << " [" << ob.rule << "]\n";
  if (em.needs_exp) out << "(declare-fun exp (Real) Real)\n";
  out << em.decls.str();
  out << em.asserts.str();
  out << "(check-sat)\n";
  return out.str();
}

}  // namespace grady
