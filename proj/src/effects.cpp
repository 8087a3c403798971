#include "grady/effects.hpp"

#include <map>
#include <sstream>

namespace grady {

GradeValue GradeValue::nat_inf() {
  GradeValue g;
  g.carrier = Carrier::NatInf;
  g.inf = true;
  return g;
}
GradeValue GradeValue::nat_of(const Rat& n) {
  GradeValue g;
  g.carrier = Carrier::NatInf;
  g.nat = n;
  return g;
}
GradeValue GradeValue::realnn(NumVal v) {
  GradeValue g;
  g.carrier = Carrier::RealNN;
  g.real = std::move(v);
  return g;
}
GradeValue GradeValue::extreal(NumVal v) {
  GradeValue g;
  g.carrier = Carrier::ExtReal;
  g.real = std::move(v);
  return g;
}
GradeValue GradeValue::stack(std::int64_t d, std::int64_t m) {
  GradeValue g;
  g.carrier = Carrier::Stack;
  g.delta = d;
  g.maxdepth = m;
  return g;
}

std::string GradeValue::to_string() const {
  switch (carrier) {
    case Carrier::NatInf: return inf ? "inf" : rat_to_string(nat);
    case Carrier::RealNN:
    case Carrier::ExtReal: return real.to_string();
    case Carrier::Stack: {
      std::ostringstream os;
      os << "stack(" << delta << ", " << maxdepth << ")";
      return os.str();
    }
  }
  return "?";
}

bool GradeValue::operator==(const GradeValue& o) const {
  if (carrier != o.carrier) return false;
  switch (carrier) {
    case Carrier::NatInf: return inf == o.inf && (inf || nat == o.nat);
    case Carrier::RealNN:
    case Carrier::ExtReal: return real == o.real;
    case Carrier::Stack: return delta == o.delta && maxdepth == o.maxdepth;
  }
  return false;
}

// --- signature tables --------------------------------------------------------

namespace {

RPtr rb(const std::string& x, BaseTy b, FPtr f) { return r_refbase(x, b, std::move(f)); }
RPtr rb_true(const std::string& x, BaseTy b) { return rb(x, b, f_true()); }

VPtr vv(const std::string& n) { return v_var(n); }
VPtr p1(const VPtr& v) { return v_proj1(v); }
VPtr p2(const VPtr& v) { return v_proj2(v); }
VPtr binop(const std::string& op, VPtr a, VPtr b) { return v_op(op, v_pair(std::move(a), std::move(b))); }
FPtr atom2(const std::string& pred, VPtr a, VPtr b) { return f_atom(pred, v_pair(std::move(a), std::move(b))); }

// Self-describing result: { z : res | z = op(x) } for argument binder x.
OpSig selfify1(const std::string& op, BaseTy arg, BaseTy res, FPtr pre = nullptr) {
  OpSig s;
  s.binder = "x";
  s.ref_arg = rb("x", arg, pre ? pre : f_true());
  s.ref_res = rb("z", res, atom2("=", vv("z"), v_op(op, vv("x"))));
  return s;
}

OpSig selfify2(const std::string& op, BaseTy a, BaseTy b, BaseTy res) {
  OpSig s;
  s.binder = "p";
  s.ref_arg = r_dpair("a", rb_true("a", a), rb_true("b", b));
  s.ref_res = rb("z", res, atom2("=", vv("z"), v_op(op, vv("p"))));
  return s;
}

// Comparison returning a refined boolean: {t:unit|rel} + {f:unit|negrel}.
OpSig cmp_op(BaseTy b, FPtr rel, FPtr negrel) {
  OpSig s;
  s.binder = "p";
  s.ref_arg = r_dpair("a", rb_true("a", b), rb_true("b", b));
  s.ref_res = r_sum(rb("t", BaseTy::Unit, std::move(rel)), rb("f", BaseTy::Unit, std::move(negrel)));
  return s;
}

void add_arith(SignatureTable& t, BaseTy b) {
  for (const char* op : {"+", "-", "*", "min", "max"}) t.ops.emplace_back(op, selfify2(op, b, b, b));
  t.ops.emplace_back("abs", selfify1("abs", b, b));
  t.ops.emplace_back("neg", selfify1("neg", b, b));
  VPtr fp = p1(vv("p")), sp = p2(vv("p"));
  t.ops.emplace_back("=", cmp_op(b, atom2("=", fp, sp),
                                 f_or(atom2("<", p1(vv("p")), p2(vv("p"))), atom2("<", p2(vv("p")), p1(vv("p"))))));
  t.ops.emplace_back("<=", cmp_op(b, atom2("<=", p1(vv("p")), p2(vv("p"))), atom2("<", p2(vv("p")), p1(vv("p")))));
  t.ops.emplace_back("<", cmp_op(b, atom2("<", p1(vv("p")), p2(vv("p"))), atom2("<=", p2(vv("p")), p1(vv("p")))));
}

OpSig bool2_op(const std::string& op) {
  OpSig s;
  s.binder = "p";
  RPtr boolA = r_sum(rb_true("t", BaseTy::Unit), rb_true("f", BaseTy::Unit));
  RPtr boolB = r_sum(rb_true("t", BaseTy::Unit), rb_true("f", BaseTy::Unit));
  s.ref_arg = r_dpair("a", boolA, boolB);
  s.ref_res = r_sum(rb_true("t", BaseTy::Unit), rb_true("f", BaseTy::Unit));
  (void)op;
  return s;
}

void add_list_ops(SignatureTable& t, BaseTy listnm, BaseTy elem) {
  t.ops.emplace_back("len", selfify1("len", listnm, BaseTy::Int));
  FPtr nonempty = atom2("<", v_lit(Rat(0), false), v_op("len", vv("x")));
  {
    OpSig s;
    s.binder = "x";
    s.ref_arg = rb("x", listnm, nonempty);
    s.ref_res = rb("z", elem, atom2("=", vv("z"), v_op("head", vv("x"))));
    t.ops.emplace_back("head", s);
  }
  {
    OpSig s;
    s.binder = "x";
    s.ref_arg = rb("x", listnm, atom2("<", v_lit(Rat(0), false), v_op("len", vv("x"))));
    s.ref_res = rb("z", listnm, atom2("=", vv("z"), v_op("tail", vv("x"))));
    t.ops.emplace_back("tail", s);
  }
  {
    OpSig s;
    s.binder = "x";
    s.ref_arg = rb_true("x", BaseTy::Unit);
    s.ref_res = rb("z", listnm, atom2("=", vv("z"), v_op("nil", vv("x"))));
    t.ops.emplace_back("nil", s);
  }
  {
    OpSig s;
    s.binder = "p";
    s.ref_arg = r_dpair("h", rb_true("h", elem), rb_true("t", listnm));
    s.ref_res = rb("z", listnm, atom2("=", vv("z"), v_op("cons", vv("p"))));
    t.ops.emplace_back("cons", s);
  }
}

SignatureTable base_signatures() {
  SignatureTable t;
  add_arith(t, BaseTy::Int);
  add_arith(t, BaseTy::Real);
  t.ops.emplace_back("/", selfify2("/", BaseTy::Real, BaseTy::Real, BaseTy::Real));
  t.ops.emplace_back("exp", selfify1("exp", BaseTy::Real, BaseTy::Real));
  {
    // not gets the predicate-swapping treatment in the checker; the entry
    // here fixes its simple signature.
    OpSig s;
    s.binder = "x";
    s.ref_arg = r_sum(rb_true("t", BaseTy::Unit), rb_true("f", BaseTy::Unit));
    s.ref_res = r_sum(rb_true("t", BaseTy::Unit), rb_true("f", BaseTy::Unit));
    t.ops.emplace_back("not", s);
  }
  t.ops.emplace_back("&&", bool2_op("&&"));
  t.ops.emplace_back("||", bool2_op("||"));
  add_list_ops(t, BaseTy::List, BaseTy::Real);
  add_list_ops(t, BaseTy::ListList, BaseTy::List);
  {
    OpSig s;
    s.binder = "p";
    s.ref_arg = r_dpair("th", rb_true("th", BaseTy::Real), rb_true("l", BaseTy::List));
    s.ref_res = rb("z", BaseTy::Int, atom2("=", vv("z"), v_op("cdf", vv("p"))));
    t.ops.emplace_back("cdf", s);
  }
  {
    OpSig s;
    s.binder = "p";
    s.ref_arg = r_dpair("x", rb_true("x", BaseTy::List),
                        r_dpair("bk", rb_true("bk", BaseTy::List), rb_true("db", BaseTy::List)));
    s.ref_res = rb("z", BaseTy::Real, atom2("=", vv("z"), v_op("maxcdferr", vv("p"))));
    t.ops.emplace_back("maxcdferr", s);
  }

  for (BaseTy b : {BaseTy::Int, BaseTy::Real}) {
    STy pr = s_prod(s_base(b), s_base(b));
    t.predicates.emplace_back("=", pr);
    t.predicates.emplace_back("<=", pr);
    t.predicates.emplace_back("<", pr);
  }
  for (STy s : {s_base(BaseTy::Unit), s_bool(), s_base(BaseTy::Event), s_base(BaseTy::List), s_base(BaseTy::ListList)})
    t.predicates.emplace_back("=", s_prod(s, s));
  return t;
}

FPtr embed_of(FPtr f) { return f_embed(std::move(f)); }

InstanceDescriptor make_cost() {
  InstanceDescriptor d;
  d.kind = Instance::Cost;
  d.name = "cost";
  d.sigs = base_signatures();
  d.sigs.basic_effects.emplace_back("nat2eff", s_base(BaseTy::Int));
  GefSig tick;
  tick.binder = "n";
  tick.ref_arg = rb("n", BaseTy::Int, atom2("<=", v_lit(Rat(0), false), vv("n")));
  tick.ref_res = rb_true("u", BaseTy::Unit);
  tick.grade = e_basic("nat2eff", vv("n"));
  d.sigs.geneffs.emplace_back("Tick", tick);
  return d;
}

InstanceDescriptor make_temporal() {
  InstanceDescriptor d;
  d.kind = Instance::Temporal;
  d.name = "temporal";
  d.sigs = base_signatures();
  d.sigs.basic_effects.emplace_back("push", s_base(BaseTy::Unit));
  d.sigs.basic_effects.emplace_back("pop", s_base(BaseTy::Unit));
  d.sigs.basic_effects.emplace_back("stack", s_prod(s_base(BaseTy::Int), s_base(BaseTy::Int)));
  GefSig emit;  // grade handled per event literal by the checker
  emit.binder = "e";
  emit.ref_arg = rb_true("e", BaseTy::Event);
  emit.ref_res = rb_true("u", BaseTy::Unit);
  emit.grade = nullptr;
  d.sigs.geneffs.emplace_back("Emit", emit);
  return d;
}

InstanceDescriptor make_ubound() {
  InstanceDescriptor d;
  d.kind = Instance::Ubound;
  d.name = "ubound";
  d.sigs = base_signatures();
  d.sigs.basic_effects.emplace_back("r2eff", s_base(BaseTy::Real));

  GefSig lap;
  lap.binder = "p";
  lap.ref_arg = r_dpair("e", rb("e", BaseTy::Real, atom2("<", v_lit(Rat(0), false), vv("e"))), rb_true("m", BaseTy::Real));
  lap.ghosts.emplace_back("t", rb("t", BaseTy::Real, atom2("<", v_lit(Rat(0), false), vv("t"))));
  lap.grade = e_basic("r2eff", v_op("exp", v_op("neg", binop("*", p1(vv("p")), vv("t")))));
  lap.ref_res = rb("y", BaseTy::Real, atom2("<=", v_op("abs", binop("-", vv("y"), p2(vv("p")))), vv("t")));
  d.sigs.geneffs.emplace_back("Lap", lap);

  FPtr in01 = f_and(atom2("<=", v_lit(Rat(0), false), vv("q")), atom2("<=", vv("q"), v_lit(Rat(1), false)));
  GefSig bern;
  bern.binder = "q";
  bern.ref_arg = rb("q", BaseTy::Real, in01);
  bern.ref_res = r_sum(rb_true("t", BaseTy::Unit), rb_true("f", BaseTy::Unit));
  bern.grade = e_unit();
  d.sigs.geneffs.emplace_back("Bern", bern);

  // Sampling axiom with a ghost side: paying P[result = g] certifies the
  // result is not g.
  GefSig bernis;
  bernis.binder = "q";
  bernis.ref_arg = rb("q", BaseTy::Real, in01);
  bernis.ghosts.emplace_back("g", r_sum(rb_true("t", BaseTy::Unit), rb_true("f", BaseTy::Unit)));
  bernis.grade = e_basic(
      "r2eff", v_op("ite", v_pair(vv("g"), v_pair(binop("-", v_lit(Rat(1), true), vv("q")), vv("q")))));
  bernis.ref_res = r_sum(rb("t", BaseTy::Unit, atom2("=", vv("g"), v_true())),
                         rb("f", BaseTy::Unit, atom2("=", vv("g"), v_false())));
  d.sigs.geneffs.emplace_back("BernIs", bernis);
  return d;
}

InstanceDescriptor make_expect() {
  InstanceDescriptor d;
  d.kind = Instance::Expect;
  d.name = "expect";
  d.sigs = base_signatures();
  d.sigs.basic_effects.emplace_back("r2eff", s_base(BaseTy::Real));
  // Bern is typed against its checked target (see the checker's hook); only
  // the simple signature lives here.
  GefSig bern;
  bern.binder = "q";
  bern.ref_arg = rb("q", BaseTy::Real, embed_of(f_and(atom2("<=", v_lit(Rat(0), false), vv("q")),
                                                      atom2("<=", vv("q"), v_lit(Rat(1), false)))));
  bern.ref_res = r_sum(rb_true("t", BaseTy::Unit), rb_true("f", BaseTy::Unit));
  bern.grade = nullptr;
  d.sigs.geneffs.emplace_back("Bern", bern);
  return d;
}

}  // namespace

const InstanceDescriptor& instance_descriptor(Instance kind) {
  static const InstanceDescriptor cost = make_cost();
  static const InstanceDescriptor temporal = make_temporal();
  static const InstanceDescriptor ubound = make_ubound();
  static const InstanceDescriptor expect = make_expect();
  switch (kind) {
    case Instance::Cost: return cost;
    case Instance::Temporal: return temporal;
    case Instance::Ubound: return ubound;
    case Instance::Expect: return expect;
  }
  return cost;
}

// --- monoid operations --------------------------------------------------------

GradeValue munit(const InstanceDescriptor& inst) {
  switch (inst.kind) {
    case Instance::Cost: return GradeValue::nat_of(Rat(0));
    case Instance::Temporal: return GradeValue::stack(0, 0);
    case Instance::Ubound: return GradeValue::realnn(NumVal(Rat(0)));
    case Instance::Expect: return GradeValue::extreal(NumVal(Rat(0)));
  }
  return GradeValue::nat_of(Rat(0));
}

namespace {
void want_same_carrier(const GradeValue& a, const GradeValue& b) {
  if (a.carrier != b.carrier) throw EvalError("grade carrier mismatch: " + a.to_string() + " vs " + b.to_string());
}
}  // namespace

GradeValue mmul(const InstanceDescriptor& inst, const GradeValue& a, const GradeValue& b) {
  (void)inst;
  want_same_carrier(a, b);
  switch (a.carrier) {
    case GradeValue::Carrier::NatInf:
      if (a.inf || b.inf) return GradeValue::nat_inf();
      return GradeValue::nat_of(a.nat + b.nat);
    case GradeValue::Carrier::RealNN: return GradeValue::realnn(a.real + b.real);
    case GradeValue::Carrier::ExtReal: return GradeValue::extreal(a.real + b.real);
    case GradeValue::Carrier::Stack: {
      std::int64_t d = a.delta + b.delta;
      std::int64_t m = std::max(a.maxdepth, a.delta + b.maxdepth);
      return GradeValue::stack(d, m);
    }
  }
  throw EvalError("bad grade");
}

Cmp3 mcompare(const InstanceDescriptor& inst, const GradeValue& a, const GradeValue& b) {
  (void)inst;
  want_same_carrier(a, b);
  switch (a.carrier) {
    case GradeValue::Carrier::NatInf:
      if (b.inf) return Cmp3::True;
      if (a.inf) return Cmp3::False;
      return a.nat <= b.nat ? Cmp3::True : Cmp3::False;
    case GradeValue::Carrier::RealNN:
    case GradeValue::Carrier::ExtReal: return num_le(a.real, b.real);
    case GradeValue::Carrier::Stack:
      return (a.delta == b.delta && a.maxdepth <= b.maxdepth) ? Cmp3::True : Cmp3::False;
  }
  return Cmp3::Unknown;
}

bool mleq(const InstanceDescriptor& inst, const GradeValue& a, const GradeValue& b) {
  return mcompare(inst, a, b) == Cmp3::True;
}

namespace {
std::int64_t small_int(const NumVal& v, const char* what) {
  Rat r = v.as_rational();
  if (denominator(r) != 1) throw EvalError(std::string(what) + ": integer expected");
  BigInt n = numerator(r);
  if (n > 1000000000 || n < -1000000000) throw EvalError(std::string(what) + ": value out of range");
  return static_cast<std::int64_t>(n);
}
}  // namespace

GradeValue eval_effect(const EPtr& e, const Env& env, const InstanceDescriptor& inst) {
  switch (e->tag) {
    case Eff::Tag::Unit: return munit(inst);
    case Eff::Tag::Mul: return mmul(inst, eval_effect(e->e1, env, inst), eval_effect(e->e2, env, inst));
    case Eff::Tag::Basic: break;
  }
  RtPtr v = eval_ground(e->arg, env);
  if (e->be == "nat2eff") {
    if (inst.kind != Instance::Cost) throw EvalError("nat2eff outside the cost instance");
    if (v->tag != RtVal::Tag::Num) throw EvalError("nat2eff: numeric argument expected");
    Rat r = v->num.as_rational();
    if (denominator(r) != 1) throw EvalError("nat2eff: natural number expected");
    if (r < 0) throw EvalError("nat2eff: negative argument");
    return GradeValue::nat_of(r);
  }
  if (e->be == "push") return GradeValue::stack(1, 1);
  if (e->be == "pop") return GradeValue::stack(-1, 0);
  if (e->be == "stack") {
    if (v->tag != RtVal::Tag::Pair) throw EvalError("stack: pair argument expected");
    std::int64_t d = small_int(v->fst->num, "stack");
    std::int64_t m = small_int(v->snd->num, "stack");
    if (m < 0) throw EvalError("stack: negative max depth");
    return GradeValue::stack(d, m);
  }
  if (e->be == "r2eff") {
    if (v->tag != RtVal::Tag::Num) throw EvalError("r2eff: numeric argument expected");
    Cmp3 nn = v->num.sign_nonneg();
    if (nn == Cmp3::False) throw EvalError("r2eff: negative grade " + v->num.to_string());
    if (nn == Cmp3::Unknown) throw EvalError("r2eff: grade sign undecided");
    return inst.kind == Instance::Expect ? GradeValue::extreal(v->num) : GradeValue::realnn(v->num);
  }
  throw EvalError("unknown basic effect " + e->be);
}

// --- effect normal forms -------------------------------------------------------

namespace {
VPtr lit0() { return v_lit(Rat(0), false); }
VPtr add_terms(const VPtr& a, const VPtr& b) {
  if (a->tag == VTerm::Tag::Lit && a->lit == 0) return b;
  if (b->tag == VTerm::Tag::Lit && b->lit == 0) return a;
  return v_op("+", v_pair(a, b));
}
VPtr max_terms(const VPtr& a, const VPtr& b) { return v_op("max", v_pair(a, b)); }
}  // namespace

EPtr normalize_effect(const EPtr& e, const InstanceDescriptor& inst) {
  bool additive = inst.kind == Instance::Cost || inst.kind == Instance::Ubound || inst.kind == Instance::Expect;
  const std::string be = inst.kind == Instance::Cost ? "nat2eff" : "r2eff";
  if (additive) {
    switch (e->tag) {
      case Eff::Tag::Unit: return e_basic(be, lit0());
      case Eff::Tag::Basic: return e->be == be ? e : nullptr;
      case Eff::Tag::Mul: {
        EPtr a = normalize_effect(e->e1, inst), b = normalize_effect(e->e2, inst);
        if (!a || !b) return nullptr;
        return e_basic(be, add_terms(a->arg, b->arg));
      }
    }
    return nullptr;
  }
  // temporal: normal form stack(d, m)
  switch (e->tag) {
    case Eff::Tag::Unit: return e_basic("stack", v_pair(lit0(), lit0()));
    case Eff::Tag::Basic:
      if (e->be == "push") return e_basic("stack", v_pair(v_lit(Rat(1), false), v_lit(Rat(1), false)));
      if (e->be == "pop") return e_basic("stack", v_pair(v_op("neg", v_lit(Rat(1), false)), lit0()));
      if (e->be == "stack") return e;
      return nullptr;
    case Eff::Tag::Mul: {
      EPtr a = normalize_effect(e->e1, inst), b = normalize_effect(e->e2, inst);
      if (!a || !b) return nullptr;
      VPtr d1 = v_proj1(a->arg), m1 = v_proj2(a->arg);
      VPtr d2 = v_proj1(b->arg), m2 = v_proj2(b->arg);
      VPtr d = normalize_projections(add_terms(d1, d2));
      VPtr m = normalize_projections(max_terms(m1, add_terms(d1, m2)));
      return e_basic("stack", v_pair(d, m));
    }
  }
  return nullptr;
}

EPtr effect_ite(const VPtr& cond, const EPtr& then_e, const EPtr& else_e, const InstanceDescriptor& inst) {
  EPtr a = normalize_effect(then_e, inst), b = normalize_effect(else_e, inst);
  if (!a || !b) return nullptr;
  if (inst.kind == Instance::Temporal) {
    VPtr d = v_op("ite", v_pair(cond, v_pair(v_proj1(a->arg), v_proj1(b->arg))));
    VPtr m = v_op("ite", v_pair(cond, v_pair(v_proj2(a->arg), v_proj2(b->arg))));
    return e_basic("stack", v_pair(normalize_projections(d), normalize_projections(m)));
  }
  return e_basic(a->be, v_op("ite", v_pair(cond, v_pair(a->arg, b->arg))));
}

FPtr effect_as_extreal_formula(const EPtr& e) {
  switch (e->tag) {
    case Eff::Tag::Unit: return f_num(v_lit(Rat(0), true));
    case Eff::Tag::Mul: return f_add(effect_as_extreal_formula(e->e1), effect_as_extreal_formula(e->e2));
    case Eff::Tag::Basic:
      if (e->be != "r2eff") throw EvalError("expect grades must use r2eff");
      return f_num(e->arg);
  }
  throw EvalError("bad effect");
}

// --- word-level temporal semantics ---------------------------------------------

std::pair<std::int64_t, std::int64_t> word_net_peak(const std::vector<bool>& word) {
  std::int64_t depth = 0, peak = 0;
  for (bool is_push : word) {
    depth += is_push ? 1 : -1;
    peak = std::max(peak, depth);
  }
  return {depth, peak};
}

bool word_in_gamma(const std::vector<bool>& word, std::int64_t d, std::int64_t m) {
  std::int64_t depth = 0;
  if (m < 0) return false;
  for (bool is_push : word) {
    depth += is_push ? 1 : -1;
    if (depth > m) return false;
  }
  return depth == d;
}

}  // namespace grady
