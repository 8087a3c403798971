#include "grady/soundness.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "grady/pretty.hpp"

namespace grady {

std::string EnvAssignment::describe() const {
  std::ostringstream os;
  bool first = true;
  for (auto& [n, v] : params) {
    if (!first) os << ", ";
    first = false;
    os << n << "=" << rt_to_string(v);
  }
  if (arg) {
    if (!first) os << ", ";
    os << "arg=" << rt_to_string(arg);
  }
  return os.str();
}

bool SoundnessReport::all_pass() const {
  for (auto& r : rows)
    if (!r.skipped && !r.pass) return false;
  return true;
}
long SoundnessReport::passed() const {
  long n = 0;
  for (auto& r : rows) n += (!r.skipped && r.pass) ? 1 : 0;
  return n;
}
long SoundnessReport::failed() const {
  long n = 0;
  for (auto& r : rows) n += (!r.skipped && !r.pass) ? 1 : 0;
  return n;
}
long SoundnessReport::skipped() const {
  long n = 0;
  for (auto& r : rows) n += r.skipped ? 1 : 0;
  return n;
}

std::vector<RunTarget> runnable_targets(const TypedProgram& tp) {
  std::vector<RunTarget> out;
  for (auto& d : tp.decls) {
    if (d.is_computation) {
      if (d.cbody) out.push_back({d.name, nullptr, "", d.ctype->grade, d.ctype->val});
      continue;
    }
    if (!d.vbody) continue;
    if (d.vtype->tag != RType::Tag::DFun) continue;
    if (!stype_ground(erase(d.vtype->t1))) continue;  // higher-order targets are not driven
    out.push_back({d.name, d.vtype->t1, d.vtype->binder, d.vtype->ct->grade, d.vtype->ct->val});
  }
  return out;
}

namespace {

const RunTarget* find_target(const std::vector<RunTarget>& ts, const std::string& name) {
  for (auto& t : ts)
    if (t.name == name) return &t;
  return nullptr;
}

Env env_with_arg(const TypedProgram& tp, const RunTarget& t, const EnvAssignment& a) {
  Env env = program_env(tp, a.params);
  if (t.domain) env = env_bind(env, t.binder, a.arg);
  return env;
}

CPtr call_term(const RunTarget& t) {
  if (!t.domain) return nullptr;
  return c_app(v_var(t.name), v_var(t.binder));
}

}  // namespace

Outcome run_target(const TypedProgram& tp, const std::string& target, const EnvAssignment& a, long fuel,
                   Rng& rng) {
  auto ts = runnable_targets(tp);
  const RunTarget* t = find_target(ts, target);
  if (!t) throw EvalError("no runnable target " + target);
  Env env = env_with_arg(tp, *t, a);
  const InstanceDescriptor& inst = instance_descriptor(tp.instance);
  if (!t->domain) {
    for (auto& d : tp.decls)
      if (d.name == target) return eval_comp(env, d.cbody, fuel, inst, rng);
  }
  return eval_comp(env, call_term(*t), fuel, inst, rng);
}

Distribution dist_target(const TypedProgram& tp, const std::string& target, const EnvAssignment& a, long fuel) {
  auto ts = runnable_targets(tp);
  const RunTarget* t = find_target(ts, target);
  if (!t) throw EvalError("no runnable target " + target);
  Env env = env_with_arg(tp, *t, a);
  const InstanceDescriptor& inst = instance_descriptor(tp.instance);
  if (!t->domain) {
    for (auto& d : tp.decls)
      if (d.name == target) return eval_dist(env, d.cbody, fuel, inst);
  }
  return eval_dist(env, call_term(*t), fuel, inst);
}

GradeValue target_grade(const TypedProgram& tp, const std::string& target, const EnvAssignment& a) {
  auto ts = runnable_targets(tp);
  const RunTarget* t = find_target(ts, target);
  if (!t) throw EvalError("no runnable target " + target);
  Env env = env_with_arg(tp, *t, a);
  return eval_effect(t->grade, env, instance_descriptor(tp.instance));
}

bool env_admissible(const TypedProgram& tp, const std::string& target, const EnvAssignment& a) {
  auto ts = runnable_targets(tp);
  const RunTarget* t = find_target(ts, target);
  if (!t) return false;
  Env env;
  bool expect = tp.instance == Instance::Expect;
  try {
    for (auto& d : tp.decls) {
      if (d.is_computation) continue;
      const RtPtr* given = nullptr;
      for (auto& [n, v] : a.params)
        if (n == d.name) given = &v;
      if (d.vbody) {
        Env tmp = program_env(tp, a.params);
        const RtPtr* v = env_lookup(tmp, d.name);
        env = env_bind(env, d.name, *v);
        continue;
      }
      if (!given) return false;
      if (!expect && !refinement_holds(d.vtype, *given, env)) return false;
      env = env_bind(env, d.name, *given);
    }
    if (t->domain) {
      if (!a.arg) return false;
      if (!expect && !refinement_holds(t->domain, a.arg, env)) return false;
    }
  } catch (const EvalError&) {
    return false;
  }
  return true;
}

// --- per-instance monitors -------------------------------------------------------

namespace {

SoundnessRow base_row(const TypedProgram& tp, const std::string& target, const EnvAssignment& a) {
  SoundnessRow r;
  r.program = tp.source_name;
  r.target = target;
  r.env = a.describe();
  return r;
}

}  // namespace

SoundnessReport check_cost(const TypedProgram& tp, const std::string& target,
                           const std::vector<EnvAssignment>& envs, long fuel) {
  SoundnessReport rep;
  Rng rng(0);
  for (auto& a : envs) {
    SoundnessRow row = base_row(tp, target, a);
    if (!env_admissible(tp, target, a)) {
      row.skipped = true;
      row.note = "environment violates context predicates";
      rep.rows.push_back(row);
      continue;
    }
    try {
      GradeValue g = target_grade(tp, target, a);
      Outcome o = run_target(tp, target, a, fuel, rng);
      row.grade = g.to_string();
      row.observed = (o.converged ? "" : "bottom, ") + o.trace.to_string();
      // the cost bound applies to diverging runs too (the model tracks cost
      // through bottom)
      bool ok = !g.inf ? (o.trace.cost <= g.nat) : true;
      row.pass = ok;
    } catch (const EvalError& e) {
      row.pass = false;
      row.note = e.what();
    }
    rep.rows.push_back(row);
  }
  return rep;
}

SoundnessReport check_temporal(const TypedProgram& tp, const std::string& target,
                               const std::vector<EnvAssignment>& envs, long fuel) {
  SoundnessReport rep;
  Rng rng(0);
  for (auto& a : envs) {
    SoundnessRow row = base_row(tp, target, a);
    if (!env_admissible(tp, target, a)) {
      row.skipped = true;
      row.note = "environment violates context predicates";
      rep.rows.push_back(row);
      continue;
    }
    try {
      GradeValue g = target_grade(tp, target, a);
      Outcome o = run_target(tp, target, a, fuel, rng);
      auto [net, peak] = word_net_peak(o.trace.events);
      row.grade = g.to_string();
      std::ostringstream obs;
      obs << (o.converged ? "" : "bottom, ") << "net " << net << ", peak " << peak;
      row.observed = obs.str();
      if (o.converged) {
        row.pass = word_in_gamma(o.trace.events, g.delta, g.maxdepth);
      } else {
        // terminated-run guarantee does not apply; check the prefix-closed
        // part of the max-depth language as a labeled strengthening
        row.pass = peak <= g.maxdepth;
        row.note = "bottom run: prefix safety only";
      }
    } catch (const EvalError& e) {
      row.pass = false;
      row.note = e.what();
    }
    rep.rows.push_back(row);
  }
  return rep;
}

Rat hoeffding_epsilon(double delta, long trials) {
  double eps = std::sqrt(std::log(1.0 / delta) / (2.0 * static_cast<double>(trials)));
  // round down a hair so the tolerance is a sound lower bound
  double lowered = eps - 1e-12;
  if (lowered < 0) lowered = 0;
  // exact dyadic conversion
  long long scaled = static_cast<long long>(lowered * 9007199254740992.0);  // 2^53
  return Rat(scaled, BigInt(9007199254740992LL));
}

namespace {

bool program_uses_lap(const CPtr& c);
bool program_uses_lap(const VPtr& v) {
  if (!v) return false;
  if (v->body && program_uses_lap(v->body)) return true;
  return program_uses_lap(v->v1) || program_uses_lap(v->v2);
}
bool program_uses_lap(const CPtr& c) {
  if (!c) return false;
  if (c->tag == CTerm::Tag::GenEff && c->name == "Lap") return true;
  return program_uses_lap(c->v1) || program_uses_lap(c->v2) || program_uses_lap(c->c1) || program_uses_lap(c->c2);
}

bool tp_uses_lap(const TypedProgram& tp) {
  for (auto& d : tp.decls)
    if (program_uses_lap(d.vbody) || program_uses_lap(d.cbody)) return true;
  return false;
}

// Result refinement of the target, with the argument substituted for the
// function binder; evaluated against runtime values.
RPtr result_type(const RunTarget& t) { return t.result; }

bool result_holds(const RunTarget& t, const Env& env, const RtPtr& value) {
  return refinement_holds(result_type(t), value, env);
}

}  // namespace

SoundnessReport check_ubound(const TypedProgram& tp, const std::string& target,
                             const std::vector<EnvAssignment>& envs, long trials, unsigned long long seed,
                             long fuel, double delta) {
  SoundnessReport rep;
  auto ts = runnable_targets(tp);
  const RunTarget* t = find_target(ts, target);
  bool lap = tp_uses_lap(tp);
  for (auto& a : envs) {
    SoundnessRow row = base_row(tp, target, a);
    row.seed = seed;
    if (!t || !env_admissible(tp, target, a)) {
      row.skipped = true;
      row.note = "environment violates context predicates";
      rep.rows.push_back(row);
      continue;
    }
    try {
      GradeValue g = target_grade(tp, target, a);
      row.grade = g.to_string();
      Env env = env_with_arg(tp, *t, a);
      if (!lap) {
        Distribution d = dist_target(tp, target, a, fuel);
        Rat fail_mass = 0;
        for (auto& e : d.entries) {
          if (e.bottom) continue;  // partial correctness: bottom is not a failure
          if (!result_holds(*t, env, e.value)) fail_mass += e.mass;
        }
        row.observed = "failure mass " + rat_to_string(fail_mass);
        row.tolerance = "exact";
        Cmp3 ok = num_le(NumVal(fail_mass), g.real);
        row.pass = ok == Cmp3::True;
        if (ok == Cmp3::Unknown) row.note = "comparison undecided";
      } else {
        Rng rng(seed);
        long fails = 0, done = 0;
        for (long i = 0; i < trials; ++i) {
          Outcome o = run_target(tp, target, a, fuel, rng);
          ++done;
          if (o.converged && !result_holds(*t, env, o.value)) ++fails;
        }
        Rat phat(fails, done);
        Rat eps = hoeffding_epsilon(delta, trials);
        row.observed = "empirical failure " + rat_to_string(phat) + " (" + std::to_string(fails) + "/" +
                       std::to_string(done) + ")";
        row.tolerance = "hoeffding " + rat_to_string(eps);
        Cmp3 ok = num_le(NumVal(phat), g.real + NumVal(eps));
        row.pass = ok == Cmp3::True;
        if (ok == Cmp3::Unknown) row.note = "comparison undecided";
      }
    } catch (const EvalError& e) {
      row.pass = false;
      row.note = e.what();
    }
    rep.rows.push_back(row);
  }
  return rep;
}

SoundnessReport check_expect(const TypedProgram& tp, const std::string& target,
                             const std::vector<EnvAssignment>& envs, long fuel) {
  SoundnessReport rep;
  auto ts = runnable_targets(tp);
  const RunTarget* t = find_target(ts, target);
  for (auto& a : envs) {
    SoundnessRow row = base_row(tp, target, a);
    if (!t) {
      row.skipped = true;
      row.note = "no such target";
      rep.rows.push_back(row);
      continue;
    }
    try {
      GradeValue g = target_grade(tp, target, a);
      row.grade = g.to_string();
      Env env = env_with_arg(tp, *t, a);
      // pre-expectation: the context's combined value, including the
      // argument's refinement
      NumVal pre(Rat(0));
      Env acc;
      for (auto& d : tp.decls) {
        if (d.is_computation) continue;
        const RtPtr* v = env_lookup(env, d.name);
        if (!v) continue;
        if (!d.vbody) pre = num_max(pre, refinement_value_extreal(d.vtype, *v, acc));
        acc = env_bind(acc, d.name, *v);
      }
      if (t->domain) pre = num_max(pre, refinement_value_extreal(t->domain, a.arg, acc));
      if (pre.is_infinite()) {
        row.skipped = true;
        row.note = "environment violates context predicates (pre-expectation is bottom)";
        rep.rows.push_back(row);
        continue;
      }
      Distribution d = dist_target(tp, target, a, fuel);
      NumVal expectation(Rat(0));
      for (auto& e : d.entries) {
        if (e.bottom) continue;  // bottom contributes 0 to the expectation
        NumVal post = refinement_value_extreal(result_type(*t), e.value, env);
        expectation = expectation + post * NumVal(e.mass);
      }
      row.observed = "E[post] " + expectation.to_string();
      row.tolerance = "pre " + pre.to_string() + ", bottom mass " + rat_to_string(d.bottom_mass());
      Cmp3 ok = num_le(expectation, pre + g.real);
      row.pass = ok == Cmp3::True;
      if (ok == Cmp3::Unknown) row.note = "comparison undecided";
      if (d.bottom_mass() != 0) row.note += (row.note.empty() ? "" : "; ") + std::string("truncated at fuel ") +
                                           std::to_string(fuel);
    } catch (const EvalError& e) {
      row.pass = false;
      row.note = e.what();
    }
    rep.rows.push_back(row);
  }
  return rep;
}

// --- default environment generation ------------------------------------------------

namespace {

void product_envs(const std::vector<std::pair<std::string, std::vector<RtPtr>>>& spaces, size_t i,
                  std::vector<std::pair<std::string, RtPtr>>& acc,
                  std::vector<std::vector<std::pair<std::string, RtPtr>>>& out, size_t cap) {
  if (out.size() >= cap) return;
  if (i == spaces.size()) {
    out.push_back(acc);
    return;
  }
  for (auto& v : spaces[i].second) {
    acc.emplace_back(spaces[i].first, v);
    product_envs(spaces, i + 1, acc, out, cap);
    acc.pop_back();
    if (out.size() >= cap) return;
  }
}

std::vector<RtPtr> default_values(const RPtr& t, const SoundnessConfig& cfg, Rng& rng) {
  switch (t->tag) {
    case RType::Tag::RefBase:
      switch (t->base) {
        case BaseTy::Unit: return {rt_unit()};
        case BaseTy::Event: return {rt_event(true), rt_event(false)};
        case BaseTy::Int: {
          std::vector<RtPtr> out;
          for (long k = cfg.int_lo; k <= cfg.int_hi; ++k) out.push_back(rt_int(k));
          return out;
        }
        case BaseTy::Real: {
          std::vector<RtPtr> out;
          for (Rat r : {Rat(0), Rat(1, 4), Rat(1, 2), Rat(3, 4), Rat(1), Rat(2)}) out.push_back(rt_rat(r));
          return out;
        }
        case BaseTy::List: {
          std::vector<RtPtr> out;
          for (int i = 0; i < cfg.list_samples; ++i) {
            long len = static_cast<long>(rng.gen() % 9);
            std::vector<RtPtr> items;
            for (long j = 0; j < len; ++j) items.push_back(rt_int(static_cast<long>(rng.gen() % 21) - 10));
            out.push_back(rt_list(std::move(items)));
          }
          return out;
        }
        case BaseTy::ListList: {
          std::vector<RtPtr> out;
          for (int i = 0; i < cfg.list_samples; ++i) {
            long len = static_cast<long>(rng.gen() % 9);
            std::vector<RtPtr> items;
            for (long j = 0; j < len; ++j) {
              long m = static_cast<long>(rng.gen() % 5);
              std::vector<RtPtr> inner;
              for (long q = 0; q < m; ++q) inner.push_back(rt_int(static_cast<long>(rng.gen() % 21) - 10));
              items.push_back(rt_list(std::move(inner)));
            }
            out.push_back(rt_list(std::move(items)));
          }
          return out;
        }
      }
      return {rt_unit()};
    case RType::Tag::Sum: {
      std::vector<RtPtr> out;
      for (auto& v : default_values(t->t1, cfg, rng)) out.push_back(rt_sum(true, v));
      for (auto& v : default_values(t->t2, cfg, rng)) out.push_back(rt_sum(false, v));
      return out;
    }
    case RType::Tag::DPair: {
      std::vector<RtPtr> out;
      auto ls = default_values(t->t1, cfg, rng);
      auto rs = default_values(t->t2, cfg, rng);
      for (auto& l : ls)
        for (auto& r : rs) out.push_back(rt_pair(l, r));
      return out;
    }
    case RType::Tag::DFun: return {};
  }
  return {};
}

}  // namespace

std::vector<EnvAssignment> default_envs(const TypedProgram& tp, const std::string& target,
                                        const SoundnessConfig& cfg) {
  auto ts = runnable_targets(tp);
  const RunTarget* t = find_target(ts, target);
  std::vector<EnvAssignment> out;
  if (!t) return out;
  Rng rng(cfg.seed);
  std::vector<std::pair<std::string, std::vector<RtPtr>>> spaces;
  for (auto& d : tp.decls)
    if (!d.is_computation && !d.vbody) spaces.emplace_back(d.name, default_values(d.vtype, cfg, rng));
  std::vector<RtPtr> args{nullptr};
  if (t->domain) args = default_values(t->domain, cfg, rng);
  std::vector<std::vector<std::pair<std::string, RtPtr>>> params;
  std::vector<std::pair<std::string, RtPtr>> acc;
  size_t cap = std::max<size_t>(1, cfg.max_envs / std::max<size_t>(1, args.size()));
  product_envs(spaces, 0, acc, params, cap);
  for (auto& p : params)
    for (auto& argv : args) {
      EnvAssignment a;
      a.params = p;
      a.arg = argv;
      out.push_back(std::move(a));
      if (out.size() >= cfg.max_envs) return out;
    }
  return out;
}

SoundnessReport run_soundness(const TypedProgram& tp, const SoundnessConfig& cfg) {
  SoundnessReport rep;
  for (auto& t : runnable_targets(tp)) {
    auto envs = default_envs(tp, t.name, cfg);
    SoundnessReport part;
    switch (tp.instance) {
      case Instance::Cost: part = check_cost(tp, t.name, envs, cfg.fuel); break;
      case Instance::Temporal: part = check_temporal(tp, t.name, envs, cfg.fuel); break;
      case Instance::Ubound:
        part = check_ubound(tp, t.name, envs, cfg.trials, cfg.seed, cfg.fuel, cfg.delta);
        break;
      case Instance::Expect: part = check_expect(tp, t.name, envs, cfg.fuel); break;
    }
    rep.rows.insert(rep.rows.end(), part.rows.begin(), part.rows.end());
  }
  return rep;
}

}  // namespace grady
