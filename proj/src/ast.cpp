#include "grady/ast.hpp"

#include <atomic>
#include <map>
#include <sstream>

namespace grady {

std::string base_name(BaseTy b) {
  switch (b) {
    case BaseTy::Unit: return "unit";
    case BaseTy::Int: return "int";
    case BaseTy::Real: return "real";
    case BaseTy::Event: return "event";
    case BaseTy::List: return "list";
    case BaseTy::ListList: return "list_list";
  }
  return "?";
}

STy s_base(BaseTy b) {
  auto t = std::make_shared<SType>();
  t->tag = SType::Tag::Base;
  t->base = b;
  return t;
}
STy s_prod(STy a, STy b) {
  auto t = std::make_shared<SType>();
  t->tag = SType::Tag::Prod;
  t->t1 = std::move(a);
  t->t2 = std::move(b);
  return t;
}
STy s_sum(STy a, STy b) {
  auto t = std::make_shared<SType>();
  t->tag = SType::Tag::Sum;
  t->t1 = std::move(a);
  t->t2 = std::move(b);
  return t;
}
STy s_arrow(STy a, STy res) {
  auto t = std::make_shared<SType>();
  t->tag = SType::Tag::Arrow;
  t->t1 = std::move(a);
  t->t2 = std::move(res);
  return t;
}
STy s_bool() { return s_sum(s_base(BaseTy::Unit), s_base(BaseTy::Unit)); }

bool stype_equal(const STy& a, const STy& b) {
  if (a->tag != b->tag) return false;
  switch (a->tag) {
    case SType::Tag::Base: return a->base == b->base;
    default: return stype_equal(a->t1, b->t1) && stype_equal(a->t2, b->t2);
  }
}

bool stype_ground(const STy& t) {
  switch (t->tag) {
    case SType::Tag::Base: return true;
    case SType::Tag::Arrow: return false;
    default: return stype_ground(t->t1) && stype_ground(t->t2);
  }
}

std::string stype_to_string(const STy& t) {
  switch (t->tag) {
    case SType::Tag::Base: return base_name(t->base);
    case SType::Tag::Prod: return "(" + stype_to_string(t->t1) + " * " + stype_to_string(t->t2) + ")";
    case SType::Tag::Sum: return "(" + stype_to_string(t->t1) + " + " + stype_to_string(t->t2) + ")";
    case SType::Tag::Arrow: return "(" + stype_to_string(t->t1) + " -> T " + stype_to_string(t->t2) + ")";
  }
  return "?";
}

// --- constructors ----------------------------------------------------------

namespace {
std::shared_ptr<VTerm> mkv(VTerm::Tag tag, Span sp) {
  auto v = std::make_shared<VTerm>();
  v->tag = tag;
  v->span = sp;
  return v;
}
std::shared_ptr<CTerm> mkc(CTerm::Tag tag, Span sp) {
  auto c = std::make_shared<CTerm>();
  c->tag = tag;
  c->span = sp;
  return c;
}
std::shared_ptr<Fml> mkf(Fml::Tag tag) {
  auto f = std::make_shared<Fml>();
  f->tag = tag;
  return f;
}
}  // namespace

VPtr v_var(std::string n, Span sp) {
  auto v = mkv(VTerm::Tag::Var, sp);
  v->name = std::move(n);
  return v;
}
VPtr v_lam(std::string binder, CPtr body, Span sp) {
  auto v = mkv(VTerm::Tag::Lam, sp);
  v->binder = std::move(binder);
  v->body = std::move(body);
  return v;
}
VPtr v_unit(Span sp) { return mkv(VTerm::Tag::Unit, sp); }
VPtr v_pair(VPtr a, VPtr b, Span sp) {
  auto v = mkv(VTerm::Tag::Pair, sp);
  v->v1 = std::move(a);
  v->v2 = std::move(b);
  return v;
}
VPtr v_inl(VPtr a, Span sp) {
  auto v = mkv(VTerm::Tag::Inl, sp);
  v->v1 = std::move(a);
  return v;
}
VPtr v_inr(VPtr a, Span sp) {
  auto v = mkv(VTerm::Tag::Inr, sp);
  v->v1 = std::move(a);
  return v;
}
VPtr v_recfun(std::string f, std::string x, CPtr body, Span sp) {
  auto v = mkv(VTerm::Tag::RecFun, sp);
  v->name = std::move(f);
  v->binder = std::move(x);
  v->body = std::move(body);
  return v;
}
VPtr v_op(std::string op, VPtr arg, Span sp) {
  auto v = mkv(VTerm::Tag::OpApp, sp);
  v->name = std::move(op);
  v->v1 = std::move(arg);
  return v;
}
VPtr v_lit(Rat val, bool is_real, Span sp) {
  auto v = mkv(VTerm::Tag::Lit, sp);
  v->lit = std::move(val);
  v->lit_is_real = is_real;
  return v;
}
VPtr v_event(bool is_push, Span sp) {
  auto v = mkv(VTerm::Tag::EventLit, sp);
  v->is_push = is_push;
  return v;
}
VPtr v_proj1(VPtr a, Span sp) {
  auto v = mkv(VTerm::Tag::Proj1, sp);
  v->v1 = std::move(a);
  return v;
}
VPtr v_proj2(VPtr a, Span sp) {
  auto v = mkv(VTerm::Tag::Proj2, sp);
  v->v1 = std::move(a);
  return v;
}
VPtr v_ascribe(VPtr a, RPtr t, Span sp) {
  auto v = mkv(VTerm::Tag::Ascribe, sp);
  v->v1 = std::move(a);
  v->ascribed = std::move(t);
  return v;
}
VPtr v_true() { return v_inl(v_unit()); }
VPtr v_false() { return v_inr(v_unit()); }

CPtr c_return(VPtr v, Span sp) {
  auto c = mkc(CTerm::Tag::Return, sp);
  c->v1 = std::move(v);
  return c;
}
CPtr c_let(std::string x, CPtr head, CPtr body, EPtr grade, Span sp) {
  auto c = mkc(CTerm::Tag::Let, sp);
  c->name = std::move(x);
  c->c1 = std::move(head);
  c->c2 = std::move(body);
  c->let_grade = std::move(grade);
  return c;
}
CPtr c_matchpair(VPtr scrut, std::string x, std::string y, CPtr body, Span sp) {
  auto c = mkc(CTerm::Tag::MatchPair, sp);
  c->v1 = std::move(scrut);
  c->x = std::move(x);
  c->y = std::move(y);
  c->c1 = std::move(body);
  return c;
}
CPtr c_app(VPtr f, VPtr a, Span sp) {
  auto c = mkc(CTerm::Tag::App, sp);
  c->v1 = std::move(f);
  c->v2 = std::move(a);
  return c;
}
CPtr c_geneff(std::string g, VPtr a, std::vector<VPtr> ghosts, Span sp) {
  auto c = mkc(CTerm::Tag::GenEff, sp);
  c->name = std::move(g);
  c->v1 = std::move(a);
  c->ghosts = std::move(ghosts);
  return c;
}
CPtr c_case(VPtr scrut, std::string x, CPtr l, std::string y, CPtr r, Span sp) {
  auto c = mkc(CTerm::Tag::Case, sp);
  c->v1 = std::move(scrut);
  c->x = std::move(x);
  c->y = std::move(y);
  c->c1 = std::move(l);
  c->c2 = std::move(r);
  return c;
}
CPtr c_ascribe(CPtr m, CTyPtr t, Span sp) {
  auto c = mkc(CTerm::Tag::Ascribe, sp);
  c->c1 = std::move(m);
  c->ascribed = std::move(t);
  return c;
}

FPtr f_true() { return mkf(Fml::Tag::True); }
FPtr f_false() { return mkf(Fml::Tag::False); }
FPtr f_atom(std::string pred, VPtr arg) {
  auto f = mkf(Fml::Tag::Atom);
  f->pred = std::move(pred);
  f->arg = std::move(arg);
  return f;
}
FPtr f_and(FPtr a, FPtr b) {
  auto f = mkf(Fml::Tag::And);
  f->f1 = std::move(a);
  f->f2 = std::move(b);
  return f;
}
FPtr f_or(FPtr a, FPtr b) {
  auto f = mkf(Fml::Tag::Or);
  f->f1 = std::move(a);
  f->f2 = std::move(b);
  return f;
}
FPtr f_implies(FPtr a, FPtr b) {
  auto f = mkf(Fml::Tag::Implies);
  f->f1 = std::move(a);
  f->f2 = std::move(b);
  return f;
}
FPtr f_embed(FPtr a) {
  auto f = mkf(Fml::Tag::Embed);
  f->f1 = std::move(a);
  return f;
}
FPtr f_num(VPtr t) {
  auto f = mkf(Fml::Tag::Num);
  f->arg = std::move(t);
  return f;
}
FPtr f_add(FPtr a, FPtr b) {
  auto f = mkf(Fml::Tag::Add);
  f->f1 = std::move(a);
  f->f2 = std::move(b);
  return f;
}
FPtr f_sub(FPtr a, FPtr b) {
  auto f = mkf(Fml::Tag::Sub);
  f->f1 = std::move(a);
  f->f2 = std::move(b);
  return f;
}
FPtr f_mul(FPtr a, FPtr b) {
  auto f = mkf(Fml::Tag::Mul);
  f->f1 = std::move(a);
  f->f2 = std::move(b);
  return f;
}

EPtr e_unit() {
  auto e = std::make_shared<Eff>();
  e->tag = Eff::Tag::Unit;
  return e;
}
EPtr e_mul(EPtr a, EPtr b) {
  auto e = std::make_shared<Eff>();
  e->tag = Eff::Tag::Mul;
  e->e1 = std::move(a);
  e->e2 = std::move(b);
  return e;
}
EPtr e_basic(std::string be, VPtr arg) {
  auto e = std::make_shared<Eff>();
  e->tag = Eff::Tag::Basic;
  e->be = std::move(be);
  e->arg = std::move(arg);
  return e;
}

RPtr r_refbase(std::string binder, BaseTy b, FPtr fml) {
  auto t = std::make_shared<RType>();
  t->tag = RType::Tag::RefBase;
  t->binder = std::move(binder);
  t->base = b;
  t->fml = std::move(fml);
  return t;
}
RPtr r_dpair(std::string binder, RPtr a, RPtr b) {
  auto t = std::make_shared<RType>();
  t->tag = RType::Tag::DPair;
  t->binder = std::move(binder);
  t->t1 = std::move(a);
  t->t2 = std::move(b);
  return t;
}
RPtr r_dfun(std::string binder, RPtr dom, CTyPtr cod) {
  auto t = std::make_shared<RType>();
  t->tag = RType::Tag::DFun;
  t->binder = std::move(binder);
  t->t1 = std::move(dom);
  t->ct = std::move(cod);
  return t;
}
RPtr r_sum(RPtr a, RPtr b) {
  auto t = std::make_shared<RType>();
  t->tag = RType::Tag::Sum;
  t->t1 = std::move(a);
  t->t2 = std::move(b);
  return t;
}
CTyPtr c_type(EPtr grade, RPtr val) {
  auto t = std::make_shared<CType>();
  t->grade = std::move(grade);
  t->val = std::move(val);
  return t;
}
RPtr r_base(BaseTy b) { return r_refbase(fresh_name(base_name(b).substr(0, 1)), b, f_true()); }
RPtr r_bool() { return r_sum(r_base(BaseTy::Unit), r_base(BaseTy::Unit)); }

std::optional<RPtr> ctx_lookup(const Context& ctx, const std::string& name) {
  for (auto it = ctx.rbegin(); it != ctx.rend(); ++it)
    if (it->name == name) return it->type;
  return std::nullopt;
}

bool SignatureTable::has_op(const std::string& n) const {
  for (auto& [k, v] : ops)
    if (k == n) return true;
  return false;
}
bool SignatureTable::has_geneff(const std::string& n) const {
  for (auto& [k, v] : geneffs)
    if (k == n) return true;
  return false;
}
bool SignatureTable::has_basic_effect(const std::string& n) const {
  for (auto& [k, v] : basic_effects)
    if (k == n) return true;
  return false;
}
std::vector<const OpSig*> SignatureTable::op_overloads(const std::string& n) const {
  std::vector<const OpSig*> out;
  for (auto& [k, v] : ops)
    if (k == n) out.push_back(&v);
  return out;
}
const GefSig* SignatureTable::geneff(const std::string& n) const {
  for (auto& [k, v] : geneffs)
    if (k == n) return &v;
  return nullptr;
}
std::vector<STy> SignatureTable::pred_overloads(const std::string& n) const {
  std::vector<STy> out;
  for (auto& [k, v] : predicates)
    if (k == n) out.push_back(v);
  return out;
}
const STy* SignatureTable::basic_effect_arg(const std::string& n) const {
  for (auto& [k, v] : basic_effects)
    if (k == n) return &v;
  return nullptr;
}

// --- free variables --------------------------------------------------------

void free_vars(const VPtr& v, std::set<std::string>& out) {
  if (!v) return;
  switch (v->tag) {
    case VTerm::Tag::Var: out.insert(v->name); return;
    case VTerm::Tag::Lam:
    case VTerm::Tag::RecFun: {
      std::set<std::string> inner;
      free_vars(v->body, inner);
      inner.erase(v->binder);
      if (v->tag == VTerm::Tag::RecFun) inner.erase(v->name);
      out.insert(inner.begin(), inner.end());
      return;
    }
    case VTerm::Tag::Ascribe:
      free_vars(v->v1, out);
      free_vars(v->ascribed, out);
      return;
    default:
      free_vars(v->v1, out);
      free_vars(v->v2, out);
      return;
  }
}

void free_vars(const CPtr& c, std::set<std::string>& out) {
  if (!c) return;
  switch (c->tag) {
    case CTerm::Tag::Return:
      free_vars(c->v1, out);
      return;
    case CTerm::Tag::Let: {
      free_vars(c->c1, out);
      std::set<std::string> inner;
      free_vars(c->c2, inner);
      if (c->let_grade) free_vars(c->let_grade, inner);
      inner.erase(c->name);
      out.insert(inner.begin(), inner.end());
      return;
    }
    case CTerm::Tag::MatchPair: {
      free_vars(c->v1, out);
      std::set<std::string> inner;
      free_vars(c->c1, inner);
      inner.erase(c->x);
      inner.erase(c->y);
      out.insert(inner.begin(), inner.end());
      return;
    }
    case CTerm::Tag::App:
      free_vars(c->v1, out);
      free_vars(c->v2, out);
      return;
    case CTerm::Tag::GenEff:
      free_vars(c->v1, out);
      for (auto& g : c->ghosts) free_vars(g, out);
      return;
    case CTerm::Tag::Case: {
      free_vars(c->v1, out);
      std::set<std::string> l, r;
      free_vars(c->c1, l);
      l.erase(c->x);
      free_vars(c->c2, r);
      r.erase(c->y);
      out.insert(l.begin(), l.end());
      out.insert(r.begin(), r.end());
      return;
    }
    case CTerm::Tag::Ascribe:
      free_vars(c->c1, out);
      free_vars(c->ascribed, out);
      return;
  }
}

void free_vars(const FPtr& f, std::set<std::string>& out) {
  if (!f) return;
  switch (f->tag) {
    case Fml::Tag::True:
    case Fml::Tag::False: return;
    case Fml::Tag::Atom:
    case Fml::Tag::Num: free_vars(f->arg, out); return;
    case Fml::Tag::Embed: free_vars(f->f1, out); return;
    default:
      free_vars(f->f1, out);
      free_vars(f->f2, out);
      return;
  }
}

void free_vars(const EPtr& e, std::set<std::string>& out) {
  if (!e) return;
  switch (e->tag) {
    case Eff::Tag::Unit: return;
    case Eff::Tag::Mul:
      free_vars(e->e1, out);
      free_vars(e->e2, out);
      return;
    case Eff::Tag::Basic: free_vars(e->arg, out); return;
  }
}

void free_vars(const RPtr& t, std::set<std::string>& out) {
  if (!t) return;
  switch (t->tag) {
    case RType::Tag::RefBase: {
      std::set<std::string> inner;
      free_vars(t->fml, inner);
      inner.erase(t->binder);
      out.insert(inner.begin(), inner.end());
      return;
    }
    case RType::Tag::DPair: {
      free_vars(t->t1, out);
      std::set<std::string> inner;
      free_vars(t->t2, inner);
      inner.erase(t->binder);
      out.insert(inner.begin(), inner.end());
      return;
    }
    case RType::Tag::DFun: {
      free_vars(t->t1, out);
      std::set<std::string> inner;
      free_vars(t->ct, inner);
      inner.erase(t->binder);
      out.insert(inner.begin(), inner.end());
      return;
    }
    case RType::Tag::Sum:
      free_vars(t->t1, out);
      free_vars(t->t2, out);
      return;
  }
}

void free_vars(const CTyPtr& t, std::set<std::string>& out) {
  if (!t) return;
  free_vars(t->grade, out);
  free_vars(t->val, out);
}

bool occurs_free(const std::string& x, const EPtr& e) {
  std::set<std::string> fv;
  free_vars(e, fv);
  return fv.count(x) > 0;
}
bool occurs_free(const std::string& x, const RPtr& t) {
  std::set<std::string> fv;
  free_vars(t, fv);
  return fv.count(x) > 0;
}
bool occurs_free(const std::string& x, const CTyPtr& t) {
  std::set<std::string> fv;
  free_vars(t, fv);
  return fv.count(x) > 0;
}

// --- fresh names ------------------------------------------------------------

namespace {
std::atomic<long> g_fresh{0};
std::string strip_uid(const std::string& n) {
  auto pos = n.find('$');
  return pos == std::string::npos ? n : n.substr(0, pos);
}
}  // namespace

std::string fresh_name(const std::string& hint) {
  long id = ++g_fresh;
  return strip_uid(hint.empty() ? "v" : hint) + "$" + std::to_string(id);
}
void reset_fresh_counter() { g_fresh = 0; }

// --- substitution -----------------------------------------------------------

VPtr normalize_projections(const VPtr& v) {
  if (!v) return v;
  switch (v->tag) {
    case VTerm::Tag::Proj1: {
      VPtr inner = normalize_projections(v->v1);
      if (inner->tag == VTerm::Tag::Pair) return inner->v1;
      return inner == v->v1 ? v : v_proj1(inner, v->span);
    }
    case VTerm::Tag::Proj2: {
      VPtr inner = normalize_projections(v->v1);
      if (inner->tag == VTerm::Tag::Pair) return inner->v2;
      return inner == v->v1 ? v : v_proj2(inner, v->span);
    }
    case VTerm::Tag::Pair: {
      VPtr a = normalize_projections(v->v1), b = normalize_projections(v->v2);
      if (a == v->v1 && b == v->v2) return v;
      return v_pair(a, b, v->span);
    }
    case VTerm::Tag::Inl: {
      VPtr a = normalize_projections(v->v1);
      return a == v->v1 ? v : v_inl(a, v->span);
    }
    case VTerm::Tag::Inr: {
      VPtr a = normalize_projections(v->v1);
      return a == v->v1 ? v : v_inr(a, v->span);
    }
    case VTerm::Tag::OpApp: {
      VPtr a = normalize_projections(v->v1);
      return a == v->v1 ? v : v_op(v->name, a, v->span);
    }
    default: return v;
  }
}

VPtr subst(const VPtr& target, const std::string& x, const VPtr& v) {
  if (!target) return target;
  switch (target->tag) {
    case VTerm::Tag::Var: return target->name == x ? v : target;
    case VTerm::Tag::Unit:
    case VTerm::Tag::Lit:
    case VTerm::Tag::EventLit: return target;
    case VTerm::Tag::Pair: return normalize_projections(v_pair(subst(target->v1, x, v), subst(target->v2, x, v), target->span));
    case VTerm::Tag::Inl: return v_inl(subst(target->v1, x, v), target->span);
    case VTerm::Tag::Inr: return v_inr(subst(target->v1, x, v), target->span);
    case VTerm::Tag::Proj1: return normalize_projections(v_proj1(subst(target->v1, x, v), target->span));
    case VTerm::Tag::Proj2: return normalize_projections(v_proj2(subst(target->v1, x, v), target->span));
    case VTerm::Tag::OpApp: return v_op(target->name, subst(target->v1, x, v), target->span);
    case VTerm::Tag::Ascribe: return v_ascribe(subst(target->v1, x, v), subst(target->ascribed, x, v), target->span);
    case VTerm::Tag::Lam: {
      if (target->binder == x) return target;
      std::set<std::string> fv;
      free_vars(v, fv);
      std::string b = target->binder;
      CPtr body = target->body;
      if (fv.count(b)) {
        std::string nb = fresh_name(b);
        body = subst(body, b, v_var(nb));
        b = nb;
      }
      return v_lam(b, subst(body, x, v), target->span);
    }
    case VTerm::Tag::RecFun: {
      if (target->binder == x || target->name == x) return target;
      std::set<std::string> fv;
      free_vars(v, fv);
      std::string f = target->name, b = target->binder;
      CPtr body = target->body;
      if (fv.count(f)) {
        std::string nf = fresh_name(f);
        body = subst(body, f, v_var(nf));
        f = nf;
      }
      if (fv.count(b)) {
        std::string nb = fresh_name(b);
        body = subst(body, b, v_var(nb));
        b = nb;
      }
      return v_recfun(f, b, subst(body, x, v), target->span);
    }
  }
  return target;
}

namespace {
// Renames a binder when it would capture a free variable of v.
template <typename T>
void avoid_capture(std::string& binder, T& scope, const std::string& x, const VPtr& v) {
  if (binder == x) return;
  std::set<std::string> fv;
  free_vars(v, fv);
  if (fv.count(binder)) {
    std::string nb = fresh_name(binder);
    scope = subst(scope, binder, v_var(nb));
    binder = nb;
  }
}
}  // namespace

CPtr subst(const CPtr& target, const std::string& x, const VPtr& v) {
  if (!target) return target;
  switch (target->tag) {
    case CTerm::Tag::Return: return c_return(subst(target->v1, x, v), target->span);
    case CTerm::Tag::App: return c_app(subst(target->v1, x, v), subst(target->v2, x, v), target->span);
    case CTerm::Tag::GenEff: {
      std::vector<VPtr> gh;
      for (auto& g : target->ghosts) gh.push_back(subst(g, x, v));
      return c_geneff(target->name, subst(target->v1, x, v), gh, target->span);
    }
    case CTerm::Tag::Ascribe: return c_ascribe(subst(target->c1, x, v), subst(target->ascribed, x, v), target->span);
    case CTerm::Tag::Let: {
      CPtr head = subst(target->c1, x, v);
      if (target->name == x) return c_let(target->name, head, target->c2, target->let_grade, target->span);
      std::string b = target->name;
      CPtr body = target->c2;
      EPtr grade = target->let_grade;
      std::set<std::string> fv;
      free_vars(v, fv);
      if (fv.count(b)) {
        std::string nb = fresh_name(b);
        body = subst(body, b, v_var(nb));
        if (grade) grade = subst(grade, b, v_var(nb));
        b = nb;
      }
      return c_let(b, head, subst(body, x, v), grade ? subst(grade, x, v) : nullptr, target->span);
    }
    case CTerm::Tag::MatchPair: {
      VPtr scrut = subst(target->v1, x, v);
      if (target->x == x || target->y == x) return c_matchpair(scrut, target->x, target->y, target->c1, target->span);
      std::string bx = target->x, by = target->y;
      CPtr body = target->c1;
      avoid_capture(bx, body, x, v);
      avoid_capture(by, body, x, v);
      return c_matchpair(scrut, bx, by, subst(body, x, v), target->span);
    }
    case CTerm::Tag::Case: {
      VPtr scrut = subst(target->v1, x, v);
      std::string bx = target->x, by = target->y;
      CPtr l = target->c1, r = target->c2;
      if (bx != x) {
        avoid_capture(bx, l, x, v);
        l = subst(l, x, v);
      }
      if (by != x) {
        avoid_capture(by, r, x, v);
        r = subst(r, x, v);
      }
      return c_case(scrut, bx, l, by, r, target->span);
    }
  }
  return target;
}

FPtr subst(const FPtr& target, const std::string& x, const VPtr& v) {
  if (!target) return target;
  switch (target->tag) {
    case Fml::Tag::True:
    case Fml::Tag::False: return target;
    case Fml::Tag::Atom: return f_atom(target->pred, subst(target->arg, x, v));
    case Fml::Tag::Num: return f_num(subst(target->arg, x, v));
    case Fml::Tag::Embed: return f_embed(subst(target->f1, x, v));
    case Fml::Tag::And: return f_and(subst(target->f1, x, v), subst(target->f2, x, v));
    case Fml::Tag::Or: return f_or(subst(target->f1, x, v), subst(target->f2, x, v));
    case Fml::Tag::Implies: return f_implies(subst(target->f1, x, v), subst(target->f2, x, v));
    case Fml::Tag::Add: return f_add(subst(target->f1, x, v), subst(target->f2, x, v));
    case Fml::Tag::Sub: return f_sub(subst(target->f1, x, v), subst(target->f2, x, v));
    case Fml::Tag::Mul: return f_mul(subst(target->f1, x, v), subst(target->f2, x, v));
  }
  return target;
}

EPtr subst(const EPtr& target, const std::string& x, const VPtr& v) {
  if (!target) return target;
  switch (target->tag) {
    case Eff::Tag::Unit: return target;
    case Eff::Tag::Mul: return e_mul(subst(target->e1, x, v), subst(target->e2, x, v));
    case Eff::Tag::Basic: return e_basic(target->be, subst(target->arg, x, v));
  }
  return target;
}

RPtr subst(const RPtr& target, const std::string& x, const VPtr& v) {
  if (!target) return target;
  switch (target->tag) {
    case RType::Tag::RefBase: {
      if (target->binder == x) return target;
      std::string b = target->binder;
      FPtr fml = target->fml;
      std::set<std::string> fv;
      free_vars(v, fv);
      if (fv.count(b)) {
        std::string nb = fresh_name(b);
        fml = subst(fml, b, v_var(nb));
        b = nb;
      }
      return r_refbase(b, target->base, subst(fml, x, v));
    }
    case RType::Tag::DPair: {
      RPtr a = subst(target->t1, x, v);
      if (target->binder == x) return r_dpair(target->binder, a, target->t2);
      std::string b = target->binder;
      RPtr snd = target->t2;
      std::set<std::string> fv;
      free_vars(v, fv);
      if (fv.count(b)) {
        std::string nb = fresh_name(b);
        snd = subst(snd, b, v_var(nb));
        b = nb;
      }
      return r_dpair(b, a, subst(snd, x, v));
    }
    case RType::Tag::DFun: {
      RPtr dom = subst(target->t1, x, v);
      if (target->binder == x) return r_dfun(target->binder, dom, target->ct);
      std::string b = target->binder;
      CTyPtr cod = target->ct;
      std::set<std::string> fv;
      free_vars(v, fv);
      if (fv.count(b)) {
        std::string nb = fresh_name(b);
        cod = subst(cod, b, v_var(nb));
        b = nb;
      }
      return r_dfun(b, dom, subst(cod, x, v));
    }
    case RType::Tag::Sum: return r_sum(subst(target->t1, x, v), subst(target->t2, x, v));
  }
  return target;
}

CTyPtr subst(const CTyPtr& target, const std::string& x, const VPtr& v) {
  if (!target) return target;
  return c_type(subst(target->grade, x, v), subst(target->val, x, v));
}

bool is_ground_term(const VPtr& v) {
  if (!v) return false;
  switch (v->tag) {
    case VTerm::Tag::Lam:
    case VTerm::Tag::RecFun: return false;
    case VTerm::Tag::Ascribe: return is_ground_term(v->v1);
    case VTerm::Tag::Pair: return is_ground_term(v->v1) && is_ground_term(v->v2);
    case VTerm::Tag::Inl:
    case VTerm::Tag::Inr:
    case VTerm::Tag::Proj1:
    case VTerm::Tag::Proj2:
    case VTerm::Tag::OpApp: return is_ground_term(v->v1);
    default: return true;
  }
}

// --- alpha equality ---------------------------------------------------------

namespace {
using Renaming = std::map<std::string, std::string>;

bool aeq(const VPtr& a, const VPtr& b, Renaming& ren);
bool aeq(const CPtr& a, const CPtr& b, Renaming& ren);
bool aeq(const FPtr& a, const FPtr& b, Renaming& ren);
bool aeq(const EPtr& a, const EPtr& b, Renaming& ren);
bool aeq(const RPtr& a, const RPtr& b, Renaming& ren);
bool aeq(const CTyPtr& a, const CTyPtr& b, Renaming& ren);

struct ScopedRename {
  Renaming& ren;
  std::string key;
  std::optional<std::string> saved;
  ScopedRename(Renaming& r, const std::string& from, const std::string& to) : ren(r), key(from) {
    auto it = ren.find(from);
    if (it != ren.end()) saved = it->second;
    ren[from] = to;
  }
  ~ScopedRename() {
    if (saved)
      ren[key] = *saved;
    else
      ren.erase(key);
  }
};

bool aeq(const VPtr& a, const VPtr& b, Renaming& ren) {
  if (!a || !b) return a == b;
  if (a->tag != b->tag) return false;
  switch (a->tag) {
    case VTerm::Tag::Var: {
      auto it = ren.find(a->name);
      return it == ren.end() ? a->name == b->name : it->second == b->name;
    }
    case VTerm::Tag::Unit: return true;
    case VTerm::Tag::Lit: return a->lit == b->lit && a->lit_is_real == b->lit_is_real;
    case VTerm::Tag::EventLit: return a->is_push == b->is_push;
    case VTerm::Tag::Pair: return aeq(a->v1, b->v1, ren) && aeq(a->v2, b->v2, ren);
    case VTerm::Tag::Inl:
    case VTerm::Tag::Inr:
    case VTerm::Tag::Proj1:
    case VTerm::Tag::Proj2: return aeq(a->v1, b->v1, ren);
    case VTerm::Tag::OpApp: return a->name == b->name && aeq(a->v1, b->v1, ren);
    case VTerm::Tag::Ascribe: return aeq(a->v1, b->v1, ren) && aeq(a->ascribed, b->ascribed, ren);
    case VTerm::Tag::Lam: {
      ScopedRename s(ren, a->binder, b->binder);
      return aeq(a->body, b->body, ren);
    }
    case VTerm::Tag::RecFun: {
      ScopedRename s1(ren, a->name, b->name);
      ScopedRename s2(ren, a->binder, b->binder);
      return aeq(a->body, b->body, ren);
    }
  }
  return false;
}

bool aeq(const CPtr& a, const CPtr& b, Renaming& ren) {
  if (!a || !b) return a == b;
  if (a->tag != b->tag) return false;
  switch (a->tag) {
    case CTerm::Tag::Return: return aeq(a->v1, b->v1, ren);
    case CTerm::Tag::App: return aeq(a->v1, b->v1, ren) && aeq(a->v2, b->v2, ren);
    case CTerm::Tag::GenEff: {
      if (a->name != b->name || a->ghosts.size() != b->ghosts.size()) return false;
      if (!aeq(a->v1, b->v1, ren)) return false;
      for (size_t i = 0; i < a->ghosts.size(); ++i)
        if (!aeq(a->ghosts[i], b->ghosts[i], ren)) return false;
      return true;
    }
    case CTerm::Tag::Ascribe: return aeq(a->c1, b->c1, ren) && aeq(a->ascribed, b->ascribed, ren);
    case CTerm::Tag::Let: {
      if (!aeq(a->c1, b->c1, ren)) return false;
      if ((a->let_grade == nullptr) != (b->let_grade == nullptr)) return false;
      ScopedRename s(ren, a->name, b->name);
      if (a->let_grade && !aeq(a->let_grade, b->let_grade, ren)) return false;
      return aeq(a->c2, b->c2, ren);
    }
    case CTerm::Tag::MatchPair: {
      if (!aeq(a->v1, b->v1, ren)) return false;
      ScopedRename s1(ren, a->x, b->x);
      ScopedRename s2(ren, a->y, b->y);
      return aeq(a->c1, b->c1, ren);
    }
    case CTerm::Tag::Case: {
      if (!aeq(a->v1, b->v1, ren)) return false;
      {
        ScopedRename s(ren, a->x, b->x);
        if (!aeq(a->c1, b->c1, ren)) return false;
      }
      ScopedRename s(ren, a->y, b->y);
      return aeq(a->c2, b->c2, ren);
    }
  }
  return false;
}

bool aeq(const FPtr& a, const FPtr& b, Renaming& ren) {
  if (!a || !b) return a == b;
  if (a->tag != b->tag) return false;
  switch (a->tag) {
    case Fml::Tag::True:
    case Fml::Tag::False: return true;
    case Fml::Tag::Atom: return a->pred == b->pred && aeq(a->arg, b->arg, ren);
    case Fml::Tag::Num: return aeq(a->arg, b->arg, ren);
    case Fml::Tag::Embed: return aeq(a->f1, b->f1, ren);
    default: return aeq(a->f1, b->f1, ren) && aeq(a->f2, b->f2, ren);
  }
}

bool aeq(const EPtr& a, const EPtr& b, Renaming& ren) {
  if (!a || !b) return a == b;
  if (a->tag != b->tag) return false;
  switch (a->tag) {
    case Eff::Tag::Unit: return true;
    case Eff::Tag::Mul: return aeq(a->e1, b->e1, ren) && aeq(a->e2, b->e2, ren);
    case Eff::Tag::Basic: return a->be == b->be && aeq(a->arg, b->arg, ren);
  }
  return false;
}

bool aeq(const RPtr& a, const RPtr& b, Renaming& ren) {
  if (!a || !b) return a == b;
  if (a->tag != b->tag) return false;
  switch (a->tag) {
    case RType::Tag::RefBase: {
      if (a->base != b->base) return false;
      ScopedRename s(ren, a->binder, b->binder);
      return aeq(a->fml, b->fml, ren);
    }
    case RType::Tag::DPair: {
      if (!aeq(a->t1, b->t1, ren)) return false;
      ScopedRename s(ren, a->binder, b->binder);
      return aeq(a->t2, b->t2, ren);
    }
    case RType::Tag::DFun: {
      if (!aeq(a->t1, b->t1, ren)) return false;
      ScopedRename s(ren, a->binder, b->binder);
      return aeq(a->ct, b->ct, ren);
    }
    case RType::Tag::Sum: return aeq(a->t1, b->t1, ren) && aeq(a->t2, b->t2, ren);
  }
  return false;
}

bool aeq(const CTyPtr& a, const CTyPtr& b, Renaming& ren) {
  if (!a || !b) return a == b;
  return aeq(a->grade, b->grade, ren) && aeq(a->val, b->val, ren);
}
}  // namespace

bool alpha_equal(const VPtr& a, const VPtr& b) {
  Renaming r;
  return aeq(a, b, r);
}
bool alpha_equal(const CPtr& a, const CPtr& b) {
  Renaming r;
  return aeq(a, b, r);
}
bool alpha_equal(const FPtr& a, const FPtr& b) {
  Renaming r;
  return aeq(a, b, r);
}
bool alpha_equal(const EPtr& a, const EPtr& b) {
  Renaming r;
  return aeq(a, b, r);
}
bool alpha_equal(const RPtr& a, const RPtr& b) {
  Renaming r;
  return aeq(a, b, r);
}
bool alpha_equal(const CTyPtr& a, const CTyPtr& b) {
  Renaming r;
  return aeq(a, b, r);
}

// --- erasure ----------------------------------------------------------------

STy erase(const RPtr& t) {
  switch (t->tag) {
    case RType::Tag::RefBase: return s_base(t->base);
    case RType::Tag::DPair: return s_prod(erase(t->t1), erase(t->t2));
    case RType::Tag::DFun: return s_arrow(erase(t->t1), erase_comp(t->ct));
    case RType::Tag::Sum: return s_sum(erase(t->t1), erase(t->t2));
  }
  throw EvalError("erase: bad type");
}

STy erase_comp(const CTyPtr& t) { return erase(t->val); }

std::vector<std::pair<std::string, STy>> erase(const Context& ctx) {
  std::vector<std::pair<std::string, STy>> out;
  out.reserve(ctx.size());
  for (auto& e : ctx) out.emplace_back(e.name, erase(e.type));
  return out;
}

std::string instance_name(Instance i) {
  switch (i) {
    case Instance::Cost: return "cost";
    case Instance::Temporal: return "temporal";
    case Instance::Ubound: return "ubound";
    case Instance::Expect: return "expect";
  }
  return "?";
}

std::optional<Instance> instance_from_name(const std::string& s) {
  if (s == "cost") return Instance::Cost;
  if (s == "temporal") return Instance::Temporal;
  if (s == "ubound") return Instance::Ubound;
  if (s == "expect") return Instance::Expect;
  return std::nullopt;
}

}  // namespace grady
