#include "grady/value.hpp"

#include <sstream>

namespace grady {

Env env_bind(const Env& e, const std::string& n, RtPtr v) {
  auto node = std::make_shared<EnvNode>();
  node->name = n;
  node->val = std::move(v);
  node->next = e;
  return node;
}

const RtPtr* env_lookup(const Env& e, const std::string& n) {
  for (const EnvNode* p = e.get(); p; p = p->next.get())
    if (p->name == n) return &p->val;
  return nullptr;
}

namespace {
std::shared_ptr<RtVal> mk(RtVal::Tag tag) {
  auto v = std::make_shared<RtVal>();
  v->tag = tag;
  return v;
}
}  // namespace

RtPtr rt_unit() {
  static RtPtr u = mk(RtVal::Tag::Unit);
  return u;
}
RtPtr rt_num(NumVal n) {
  auto v = mk(RtVal::Tag::Num);
  v->num = std::move(n);
  return v;
}
RtPtr rt_int(long x) { return rt_num(NumVal(Rat(x))); }
RtPtr rt_rat(const Rat& x) { return rt_num(NumVal(x)); }
RtPtr rt_event(bool is_push) {
  auto v = mk(RtVal::Tag::Event);
  v->is_push = is_push;
  return v;
}
RtPtr rt_list(std::vector<RtPtr> items) {
  auto v = mk(RtVal::Tag::List);
  v->items = std::move(items);
  return v;
}
RtPtr rt_pair(RtPtr a, RtPtr b) {
  auto v = mk(RtVal::Tag::Pair);
  v->fst = std::move(a);
  v->snd = std::move(b);
  return v;
}
RtPtr rt_sum(bool left, RtPtr payload) {
  auto v = mk(RtVal::Tag::Sum);
  v->sum_left = left;
  v->fst = std::move(payload);
  return v;
}
RtPtr rt_bool(bool b) { return rt_sum(b, rt_unit()); }
RtPtr rt_closure(Env env, std::string binder, CPtr body) {
  auto v = mk(RtVal::Tag::Closure);
  v->cenv = std::move(env);
  v->binder = std::move(binder);
  v->body = std::move(body);
  return v;
}
RtPtr rt_recclosure(Env env, std::string fname, std::string binder, CPtr body) {
  auto v = mk(RtVal::Tag::RecClosure);
  v->cenv = std::move(env);
  v->fname = std::move(fname);
  v->binder = std::move(binder);
  v->body = std::move(body);
  return v;
}

bool rt_is_ground(const RtPtr& v) {
  switch (v->tag) {
    case RtVal::Tag::Closure:
    case RtVal::Tag::RecClosure: return false;
    case RtVal::Tag::Pair: return rt_is_ground(v->fst) && rt_is_ground(v->snd);
    case RtVal::Tag::Sum: return rt_is_ground(v->fst);
    case RtVal::Tag::List: {
      for (auto& i : v->items)
        if (!rt_is_ground(i)) return false;
      return true;
    }
    default: return true;
  }
}

bool rt_equal(const RtPtr& a, const RtPtr& b) {
  if (a->tag != b->tag) return false;
  switch (a->tag) {
    case RtVal::Tag::Unit: return true;
    case RtVal::Tag::Num: {
      Cmp3 c = num_eq(a->num, b->num);
      if (c == Cmp3::Unknown) throw EvalError("value equality undecided");
      return c == Cmp3::True;
    }
    case RtVal::Tag::Event: return a->is_push == b->is_push;
    case RtVal::Tag::Pair: return rt_equal(a->fst, b->fst) && rt_equal(a->snd, b->snd);
    case RtVal::Tag::Sum: return a->sum_left == b->sum_left && rt_equal(a->fst, b->fst);
    case RtVal::Tag::List: {
      if (a->items.size() != b->items.size()) return false;
      for (size_t i = 0; i < a->items.size(); ++i)
        if (!rt_equal(a->items[i], b->items[i])) return false;
      return true;
    }
    default: return a.get() == b.get();
  }
}

bool rt_less(const RtPtr& a, const RtPtr& b) {
  if (a->tag != b->tag) return static_cast<int>(a->tag) < static_cast<int>(b->tag);
  switch (a->tag) {
    case RtVal::Tag::Unit: return false;
    case RtVal::Tag::Num: {
      Cmp3 lt = num_lt(a->num, b->num);
      if (lt != Cmp3::Unknown) return lt == Cmp3::True;
      return a->num.lex_less(b->num);
    }
    case RtVal::Tag::Event: return a->is_push < b->is_push;
    case RtVal::Tag::Pair:
      if (!rt_equal(a->fst, b->fst)) return rt_less(a->fst, b->fst);
      return rt_less(a->snd, b->snd);
    case RtVal::Tag::Sum:
      if (a->sum_left != b->sum_left) return a->sum_left && !b->sum_left;
      return rt_less(a->fst, b->fst);
    case RtVal::Tag::List: {
      size_t n = std::min(a->items.size(), b->items.size());
      for (size_t i = 0; i < n; ++i)
        if (!rt_equal(a->items[i], b->items[i])) return rt_less(a->items[i], b->items[i]);
      return a->items.size() < b->items.size();
    }
    default: return a.get() < b.get();
  }
}

std::string rt_to_string(const RtPtr& v) {
  switch (v->tag) {
    case RtVal::Tag::Unit: return "()";
    case RtVal::Tag::Num: return v->num.to_string();
    case RtVal::Tag::Event: return v->is_push ? "push" : "pop";
    case RtVal::Tag::Pair: return "(" + rt_to_string(v->fst) + ", " + rt_to_string(v->snd) + ")";
    case RtVal::Tag::Sum: {
      if (v->fst->tag == RtVal::Tag::Unit) return v->sum_left ? "true" : "false";
      return (v->sum_left ? "inl " : "inr ") + rt_to_string(v->fst);
    }
    case RtVal::Tag::List: {
      std::ostringstream os;
      os << "[";
      for (size_t i = 0; i < v->items.size(); ++i) {
        if (i) os << ", ";
        os << rt_to_string(v->items[i]);
      }
      os << "]";
      return os.str();
    }
    case RtVal::Tag::Closure: return "<fun>";
    case RtVal::Tag::RecClosure: return "<rec " + v->fname + ">";
  }
  return "?";
}

// --- builtin op semantics ----------------------------------------------------

namespace {

const NumVal& want_num(const RtPtr& v, const char* op) {
  if (v->tag != RtVal::Tag::Num) throw EvalError(std::string(op) + ": numeric argument expected, got " + rt_to_string(v));
  return v->num;
}

std::pair<RtPtr, RtPtr> want_pair(const RtPtr& v, const char* op) {
  if (v->tag != RtVal::Tag::Pair) throw EvalError(std::string(op) + ": pair argument expected");
  return {v->fst, v->snd};
}

bool want_bool(const RtPtr& v, const char* op) {
  if (v->tag != RtVal::Tag::Sum || v->fst->tag != RtVal::Tag::Unit)
    throw EvalError(std::string(op) + ": boolean argument expected");
  return v->sum_left;
}

const std::vector<RtPtr>& want_list(const RtPtr& v, const char* op) {
  if (v->tag != RtVal::Tag::List) throw EvalError(std::string(op) + ": list argument expected");
  return v->items;
}

Cmp3 decide(Cmp3 c, const char* what) {
  if (c == Cmp3::Unknown) throw EvalError(std::string(what) + " comparison undecided");
  return c;
}

// Count of elements of l that are <= threshold.
RtPtr op_cdf(const RtPtr& theta, const RtPtr& l) {
  const NumVal& th = want_num(theta, "cdf");
  long count = 0;
  for (auto& e : want_list(l, "cdf"))
    if (decide(num_le(want_num(e, "cdf"), th), "cdf") == Cmp3::True) ++count;
  return rt_int(count);
}

// max_i |ncdf[i] - cdf(bkts[i], db)| over the common prefix; 0 when empty.
RtPtr op_maxcdferr(const RtPtr& ncdf, const RtPtr& bkts, const RtPtr& db) {
  auto& xs = want_list(ncdf, "maxcdferr");
  auto& ts = want_list(bkts, "maxcdferr");
  size_t n = std::min(xs.size(), ts.size());
  NumVal best(Rat(0));
  for (size_t i = 0; i < n; ++i) {
    NumVal c = op_cdf(ts[i], db)->num;
    NumVal d = num_abs(want_num(xs[i], "maxcdferr") - c);
    best = num_max(best, d);
  }
  return rt_num(best);
}

}  // namespace

RtPtr eval_ground(const VPtr& term, const Env& env) {
  switch (term->tag) {
    case VTerm::Tag::Var: {
      const RtPtr* v = env_lookup(env, term->name);
      if (!v) throw EvalError("unbound variable " + term->name);
      return *v;
    }
    case VTerm::Tag::Unit: return rt_unit();
    case VTerm::Tag::Lit: return rt_rat(term->lit);
    case VTerm::Tag::EventLit: return rt_event(term->is_push);
    case VTerm::Tag::Pair: return rt_pair(eval_ground(term->v1, env), eval_ground(term->v2, env));
    case VTerm::Tag::Inl: return rt_sum(true, eval_ground(term->v1, env));
    case VTerm::Tag::Inr: return rt_sum(false, eval_ground(term->v1, env));
    case VTerm::Tag::Proj1: {
      auto [a, b] = want_pair(eval_ground(term->v1, env), "fst");
      (void)b;
      return a;
    }
    case VTerm::Tag::Proj2: {
      auto [a, b] = want_pair(eval_ground(term->v1, env), "snd");
      (void)a;
      return b;
    }
    case VTerm::Tag::Ascribe: return eval_ground(term->v1, env);
    case VTerm::Tag::Lam:
    case VTerm::Tag::RecFun: throw EvalError("ground evaluation reached a function term");
    case VTerm::Tag::OpApp: break;
  }

  const std::string& op = term->name;
  RtPtr a = eval_ground(term->v1, env);

  if (op == "+" || op == "-" || op == "*" || op == "/" || op == "min" || op == "max") {
    auto [l, r] = want_pair(a, op.c_str());
    const NumVal& x = want_num(l, op.c_str());
    const NumVal& y = want_num(r, op.c_str());
    if (op == "+") return rt_num(x + y);
    if (op == "-") return rt_num(x - y);
    if (op == "*") return rt_num(x * y);
    if (op == "/") return rt_num(x / y);
    if (op == "min") return rt_num(num_min(x, y));
    return rt_num(num_max(x, y));
  }
  if (op == "abs") return rt_num(num_abs(want_num(a, "abs")));
  if (op == "exp") return rt_num(num_exp(want_num(a, "exp")));
  if (op == "neg") return rt_num(want_num(a, "neg").negate());
  if (op == "=" || op == "<=" || op == "<") {
    auto [l, r] = want_pair(a, op.c_str());
    if (op == "=") return rt_bool(rt_equal(l, r));
    Cmp3 c = op == "<=" ? num_le(want_num(l, op.c_str()), want_num(r, op.c_str()))
                        : num_lt(want_num(l, op.c_str()), want_num(r, op.c_str()));
    return rt_bool(decide(c, op.c_str()) == Cmp3::True);
  }
  if (op == "not") return rt_bool(!want_bool(a, "not"));
  if (op == "&&" || op == "||") {
    auto [l, r] = want_pair(a, op.c_str());
    bool x = want_bool(l, op.c_str()), y = want_bool(r, op.c_str());
    return rt_bool(op == "&&" ? (x && y) : (x || y));
  }
  if (op == "ite") {
    auto [c, rest] = want_pair(a, "ite");
    auto [t, f] = want_pair(rest, "ite");
    return want_bool(c, "ite") ? t : f;
  }
  if (op == "len") return rt_int(static_cast<long>(want_list(a, "len").size()));
  if (op == "head") {
    auto& items = want_list(a, "head");
    if (items.empty()) throw EvalError("head of empty list");
    return items.front();
  }
  if (op == "tail") {
    auto& items = want_list(a, "tail");
    if (items.empty()) throw EvalError("tail of empty list");
    return rt_list(std::vector<RtPtr>(items.begin() + 1, items.end()));
  }
  if (op == "nil") return rt_list({});
  if (op == "cons") {
    auto [h, t] = want_pair(a, "cons");
    std::vector<RtPtr> items;
    items.push_back(h);
    auto& rest = want_list(t, "cons");
    items.insert(items.end(), rest.begin(), rest.end());
    return rt_list(std::move(items));
  }
  if (op == "cdf") {
    auto [theta, l] = want_pair(a, "cdf");
    return op_cdf(theta, l);
  }
  if (op == "maxcdferr") {
    auto [x, rest] = want_pair(a, "maxcdferr");
    auto [bkts, db] = want_pair(rest, "maxcdferr");
    return op_maxcdferr(x, bkts, db);
  }
  throw EvalError("unknown effect-free operation " + op);
}

bool eval_fml_bool(const FPtr& f, const Env& env) {
  switch (f->tag) {
    case Fml::Tag::True: return true;
    case Fml::Tag::False: return false;
    case Fml::Tag::And: return eval_fml_bool(f->f1, env) && eval_fml_bool(f->f2, env);
    case Fml::Tag::Or: return eval_fml_bool(f->f1, env) || eval_fml_bool(f->f2, env);
    case Fml::Tag::Implies: return !eval_fml_bool(f->f1, env) || eval_fml_bool(f->f2, env);
    case Fml::Tag::Atom: {
      RtPtr arg = eval_ground(f->arg, env);
      if (f->pred == "=" || f->pred == "<=" || f->pred == "<") {
        auto [l, r] = std::pair(arg->fst, arg->snd);
        if (arg->tag != RtVal::Tag::Pair) throw EvalError("comparison predicate expects a pair");
        if (f->pred == "=") return rt_equal(l, r);
        Cmp3 c = f->pred == "<=" ? num_le(l->num, r->num) : num_lt(l->num, r->num);
        if (l->tag != RtVal::Tag::Num || r->tag != RtVal::Tag::Num)
          throw EvalError("order predicate expects numbers");
        if (c == Cmp3::Unknown) throw EvalError("predicate comparison undecided");
        return c == Cmp3::True;
      }
      throw EvalError("uninterpreted predicate symbol " + f->pred);
    }
    default: throw EvalError("extended-real formula in a boolean context");
  }
}

bool refinement_holds(const RPtr& t, const RtPtr& v, Env env) {
  switch (t->tag) {
    case RType::Tag::RefBase: return eval_fml_bool(t->fml, env_bind(env, t->binder, v));
    case RType::Tag::Sum: return refinement_holds(v->sum_left ? t->t1 : t->t2, v->fst, env);
    case RType::Tag::DPair:
      if (!refinement_holds(t->t1, v->fst, env)) return false;
      return refinement_holds(t->t2, v->snd, env_bind(env, t->binder, v->fst));
    case RType::Tag::DFun: return true;
  }
  return true;
}

NumVal refinement_value_extreal(const RPtr& t, const RtPtr& v, Env env) {
  switch (t->tag) {
    case RType::Tag::RefBase: return eval_fml_extreal(t->fml, env_bind(env, t->binder, v));
    case RType::Tag::Sum: return refinement_value_extreal(v->sum_left ? t->t1 : t->t2, v->fst, env);
    case RType::Tag::DPair: {
      NumVal a = refinement_value_extreal(t->t1, v->fst, env);
      return num_max(a, refinement_value_extreal(t->t2, v->snd, env_bind(env, t->binder, v->fst)));
    }
    case RType::Tag::DFun: return NumVal(Rat(0));  // top of [0,inf]^op
  }
  return NumVal(Rat(0));
}

NumVal eval_fml_extreal(const FPtr& f, const Env& env) {
  switch (f->tag) {
    case Fml::Tag::True: return NumVal(Rat(0));
    case Fml::Tag::False: return NumVal::infinity();
    case Fml::Tag::Embed: return eval_fml_bool(f->f1, env) ? NumVal(Rat(0)) : NumVal::infinity();
    case Fml::Tag::Num: {
      RtPtr v = eval_ground(f->arg, env);
      if (v->tag != RtVal::Tag::Num) throw EvalError("numeric formula expects a number");
      return v->num;
    }
    // Meet in [0,inf]^op is numeric max, join is numeric min.
    case Fml::Tag::And: return num_max(eval_fml_extreal(f->f1, env), eval_fml_extreal(f->f2, env));
    case Fml::Tag::Or: return num_min(eval_fml_extreal(f->f1, env), eval_fml_extreal(f->f2, env));
    case Fml::Tag::Add: return eval_fml_extreal(f->f1, env) + eval_fml_extreal(f->f2, env);
    case Fml::Tag::Mul: return eval_fml_extreal(f->f1, env) * eval_fml_extreal(f->f2, env);
    case Fml::Tag::Sub: return num_monus(eval_fml_extreal(f->f1, env), eval_fml_extreal(f->f2, env));
    case Fml::Tag::Atom: return eval_fml_bool(f, env) ? NumVal(Rat(0)) : NumVal::infinity();
    case Fml::Tag::Implies: throw EvalError("implication inside an extended-real formula");
  }
  throw EvalError("bad formula");
}

}  // namespace grady
