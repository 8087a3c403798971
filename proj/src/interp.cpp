#include "grady/interp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace grady {

std::string EffectTrace::to_string() const {
  switch (kind) {
    case Instance::Cost: return "cost " + rat_to_string(cost);
    case Instance::Temporal: {
      std::ostringstream os;
      os << "events [";
      for (size_t i = 0; i < events.size(); ++i) {
        if (i) os << " ";
        os << (events[i] ? "push" : "pop");
      }
      os << "]";
      return os.str();
    }
    case Instance::Ubound: return failed ? "fail" : "ok";
    case Instance::Expect: return "post " + realized.to_string();
  }
  return "";
}

Rat Distribution::bottom_mass() const {
  Rat m = 0;
  for (auto& e : entries)
    if (e.bottom) m += e.mass;
  return m;
}

Rat Distribution::total_mass() const {
  Rat m = 0;
  for (auto& e : entries) m += e.mass;
  return m;
}

double sample_laplace(double scale, double location, Rng& rng) {
  if (!(scale > 0)) throw EvalError("Lap: scale must be positive");
  double u = rng.uniform01();
  if (u < 0.5) return location + scale * std::log(2.0 * u);
  return location - scale * std::log(2.0 * (1.0 - u));
}

namespace {

double to_double(const NumVal& v, const char* what) {
  Rat r = v.as_rational();
  (void)what;
  return static_cast<double>(numerator(r)) / static_cast<double>(denominator(r));
}

Rat rat_from_double(double d) {
  // doubles are dyadic rationals; the conversion is exact
  if (!std::isfinite(d)) throw EvalError("non-finite sample");
  int exp2 = 0;
  double m = std::frexp(d, &exp2);
  long long mant = static_cast<long long>(std::ldexp(m, 53));
  exp2 -= 53;
  Rat r(mant);
  if (exp2 > 0) {
    BigInt p = BigInt(1) << exp2;
    r *= Rat(p);
  } else if (exp2 < 0) {
    BigInt p = BigInt(1) << (-exp2);
    r /= Rat(p);
  }
  return r;
}

struct Evaluator {
  const InstanceDescriptor& inst;
  Rng* rng;  // null in distribution mode
  long fuel;
  long fuel_used = 0;
  EffectTrace trace;

  Evaluator(const InstanceDescriptor& i, Rng* r, long f) : inst(i), rng(r), fuel(f) {
    trace.kind = i.kind;
    trace.cost = 0;
  }

  struct BottomSignal {};

  RtPtr eval_value(const VPtr& v, const Env& env) {
    switch (v->tag) {
      case VTerm::Tag::Lam: return rt_closure(env, v->binder, v->body);
      case VTerm::Tag::RecFun: return rt_recclosure(env, v->name, v->binder, v->body);
      case VTerm::Tag::Pair: return rt_pair(eval_value(v->v1, env), eval_value(v->v2, env));
      case VTerm::Tag::Inl: return rt_sum(true, eval_value(v->v1, env));
      case VTerm::Tag::Inr: return rt_sum(false, eval_value(v->v1, env));
      case VTerm::Tag::Ascribe: return eval_value(v->v1, env);
      default: return eval_ground(v, env);
    }
  }

  RtPtr run(const CPtr& m, Env env) {
    switch (m->tag) {
      case CTerm::Tag::Return: return eval_value(m->v1, env);
      case CTerm::Tag::Ascribe: return run(m->c1, env);
      case CTerm::Tag::Let: {
        RtPtr head = run(m->c1, env);
        return run(m->c2, env_bind(env, m->name, head));
      }
      case CTerm::Tag::MatchPair: {
        RtPtr p = eval_value(m->v1, env);
        if (p->tag != RtVal::Tag::Pair) throw EvalError("match on a non-pair (checker bug)");
        return run(m->c1, env_bind(env_bind(env, m->x, p->fst), m->y, p->snd));
      }
      case CTerm::Tag::Case: {
        RtPtr s = eval_value(m->v1, env);
        if (s->tag != RtVal::Tag::Sum) throw EvalError("case on a non-sum (checker bug)");
        if (s->sum_left) return run(m->c1, env_bind(env, m->x, s->fst));
        return run(m->c2, env_bind(env, m->y, s->fst));
      }
      case CTerm::Tag::App: {
        RtPtr f = eval_value(m->v1, env);
        RtPtr a = eval_value(m->v2, env);
        return apply(f, a);
      }
      case CTerm::Tag::GenEff: return generic_effect(m, env);
    }
    throw EvalError("bad computation");
  }

  RtPtr apply(const RtPtr& f, const RtPtr& a) {
    if (f->tag == RtVal::Tag::Closure) return run(f->body, env_bind(f->cenv, f->binder, a));
    if (f->tag == RtVal::Tag::RecClosure) {
      if (fuel_used >= fuel) throw BottomSignal{};
      ++fuel_used;
      Env env = env_bind(f->cenv, f->fname, f);
      return run(f->body, env_bind(env, f->binder, a));
    }
    throw EvalError("application of a non-function (checker bug)");
  }

  RtPtr generic_effect(const CPtr& m, const Env& env) {
    // ghost arguments are typing artifacts; they are not evaluated
    RtPtr arg = eval_value(m->v1, env);
    const std::string& g = m->name;
    if (g == "Tick") {
      if (inst.kind != Instance::Cost) throw EvalError("Tick outside the cost instance");
      Rat n = arg->num.as_rational();
      if (n < 0) throw EvalError("Tick: negative cost");
      trace.cost += n;
      return rt_unit();
    }
    if (g == "Emit") {
      trace.events.push_back(arg->is_push);
      return rt_unit();
    }
    if (g == "Bern" || g == "BernIs") {
      Rat p = arg->num.as_rational();
      if (p < 0 || p > 1) throw EvalError("Bern: probability out of range");
      if (!rng) throw EvalError("probabilistic effect in deterministic mode");
      Rat u = rat_from_double(rng->uniform01());
      return rt_bool(u < p);
    }
    if (g == "Lap") {
      if (arg->tag != RtVal::Tag::Pair) throw EvalError("Lap expects (scale, location)");
      double eps = to_double(arg->fst->num, "Lap");
      double loc = to_double(arg->snd->num, "Lap");
      if (!(eps > 0)) throw EvalError("Lap: scale must be positive");
      if (!rng) throw EvalError("continuous effect requires sampling mode");
      double y = sample_laplace(eps, loc, *rng);
      return rt_num(NumVal(rat_from_double(y)));
    }
    throw EvalError("unknown generic effect " + g);
  }
};

}  // namespace

Outcome eval_comp(Env env, const CPtr& m, long fuel, const InstanceDescriptor& inst, Rng& rng) {
  Evaluator ev(inst, &rng, fuel);
  Outcome out;
  try {
    RtPtr v = ev.run(m, env);
    out.converged = true;
    out.value = v;
  } catch (const Evaluator::BottomSignal&) {
    out.converged = false;
  }
  out.trace = ev.trace;
  out.fuel_used = ev.fuel_used;
  return out;
}

// --- exact distributions -------------------------------------------------------------

namespace {

struct DistEvaluator {
  const InstanceDescriptor& inst;
  long fuel_limit;

  struct State {
    Env env;
    long fuel_used;
  };

  using Weighted = std::vector<std::pair<RtPtr, Rat>>;  // null value = bottom

  // Evaluates m; invokes the continuation on each converged (value, mass).
  // Bottom outcomes accumulate directly into `bottom`.
  template <typename K>
  void run(const CPtr& m, Env env, long fuel_used, const Rat& mass, Rat& bottom, const K& k) {
    switch (m->tag) {
      case CTerm::Tag::Return: {
        k(eval_pure(m->v1, env), fuel_used, mass);
        return;
      }
      case CTerm::Tag::Ascribe: run(m->c1, env, fuel_used, mass, bottom, k); return;
      case CTerm::Tag::Let: {
        run(m->c1, env, fuel_used, mass, bottom, [&](RtPtr v, long fu, const Rat& ms) {
          run(m->c2, env_bind(env, m->name, v), fu, ms, bottom, k);
        });
        return;
      }
      case CTerm::Tag::MatchPair: {
        RtPtr p = eval_pure(m->v1, env);
        run(m->c1, env_bind(env_bind(env, m->x, p->fst), m->y, p->snd), fuel_used, mass, bottom, k);
        return;
      }
      case CTerm::Tag::Case: {
        RtPtr s = eval_pure(m->v1, env);
        if (s->sum_left)
          run(m->c1, env_bind(env, m->x, s->fst), fuel_used, mass, bottom, k);
        else
          run(m->c2, env_bind(env, m->y, s->fst), fuel_used, mass, bottom, k);
        return;
      }
      case CTerm::Tag::App: {
        RtPtr f = eval_pure(m->v1, env);
        RtPtr a = eval_pure(m->v2, env);
        if (f->tag == RtVal::Tag::Closure) {
          run(f->body, env_bind(f->cenv, f->binder, a), fuel_used, mass, bottom, k);
          return;
        }
        if (f->tag == RtVal::Tag::RecClosure) {
          if (fuel_used >= fuel_limit) {
            bottom += mass;
            return;
          }
          Env env2 = env_bind(f->cenv, f->fname, f);
          run(f->body, env_bind(env2, f->binder, a), fuel_used + 1, mass, bottom, k);
          return;
        }
        throw EvalError("application of a non-function (checker bug)");
      }
      case CTerm::Tag::GenEff: {
        const std::string& g = m->name;
        if (g == "Bern" || g == "BernIs") {
          RtPtr arg = eval_pure(m->v1, env);
          Rat p = arg->num.as_rational();
          if (p < 0 || p > 1) throw EvalError("Bern: probability out of range");
          if (p > 0) k(rt_bool(true), fuel_used, mass * p);
          if (p < 1) k(rt_bool(false), fuel_used, mass * (1 - p));
          return;
        }
        if (g == "Lap") throw EvalError("continuous effect Lap requires sampling mode");
        if (g == "Tick" || g == "Emit") {
          eval_pure(m->v1, env);
          k(rt_unit(), fuel_used, mass);
          return;
        }
        throw EvalError("unknown generic effect " + g);
      }
    }
  }

  RtPtr eval_pure(const VPtr& v, const Env& env) {
    switch (v->tag) {
      case VTerm::Tag::Lam: return rt_closure(env, v->binder, v->body);
      case VTerm::Tag::RecFun: return rt_recclosure(env, v->name, v->binder, v->body);
      case VTerm::Tag::Pair: return rt_pair(eval_pure(v->v1, env), eval_pure(v->v2, env));
      case VTerm::Tag::Inl: return rt_sum(true, eval_pure(v->v1, env));
      case VTerm::Tag::Inr: return rt_sum(false, eval_pure(v->v1, env));
      case VTerm::Tag::Ascribe: return eval_pure(v->v1, env);
      default: return eval_ground(v, env);
    }
  }
};

}  // namespace

Distribution eval_dist(Env env, const CPtr& m, long fuel, const InstanceDescriptor& inst) {
  DistEvaluator ev{inst, fuel};
  Rat bottom = 0;
  std::vector<std::pair<RtPtr, Rat>> support;
  ev.run(m, env, 0, Rat(1), bottom, [&](RtPtr v, long, const Rat& mass) {
    for (auto& [sv, sm] : support) {
      if (rt_equal(sv, v)) {
        sm += mass;
        return;
      }
    }
    support.emplace_back(v, mass);
  });
  std::sort(support.begin(), support.end(), [](const auto& a, const auto& b) { return rt_less(a.first, b.first); });
  Distribution d;
  for (auto& [v, mass] : support)
    if (mass != 0) d.entries.push_back({false, v, mass});
  if (bottom != 0) d.entries.push_back({true, nullptr, bottom});
  return d;
}

Env program_env(const TypedProgram& tp, const std::vector<std::pair<std::string, RtPtr>>& params) {
  Env env;
  for (auto& d : tp.decls) {
    if (d.is_computation) continue;
    if (d.vbody) {
      Evaluator ev(instance_descriptor(tp.instance), nullptr, 0);
      env = env_bind(env, d.name, ev.eval_value(d.vbody, env));
    } else {
      const RtPtr* v = nullptr;
      for (auto& [n, val] : params)
        if (n == d.name) v = &val;
      if (!v) throw EvalError("missing value for context parameter " + d.name);
      env = env_bind(env, d.name, *v);
    }
  }
  return env;
}

}  // namespace grady
