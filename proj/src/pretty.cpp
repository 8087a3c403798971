#include "grady/pretty.hpp"

#include <sstream>

namespace grady {

std::string display_name(const std::string& n) {
  auto pos = n.find('$');
  return pos == std::string::npos ? n : n.substr(0, pos);
}

namespace {

bool is_infix_op(const std::string& n) {
  return n == "+" || n == "-" || n == "*" || n == "/" || n == "=" || n == "<=" || n == "<" || n == "&&" ||
         n == "||" || n == "cons";
}

std::string pv(const VPtr& v, Instance inst);

std::string pv_atom(const VPtr& v, Instance inst) {
  std::string s = pv(v, inst);
  switch (v->tag) {
    case VTerm::Tag::Var:
    case VTerm::Tag::Unit:
    case VTerm::Tag::Lit:
    case VTerm::Tag::EventLit:
    case VTerm::Tag::Pair: return s;
    case VTerm::Tag::OpApp:
      if (!is_infix_op(v->name)) return s;
      return "(" + s + ")";
    default: return "(" + s + ")";
  }
}

std::string pc(const CPtr& c, Instance inst);

std::string pv(const VPtr& v, Instance inst) {
  switch (v->tag) {
    case VTerm::Tag::Var: return display_name(v->name);
    case VTerm::Tag::Unit: return "()";
    case VTerm::Tag::Lit: {
      if (v->lit_is_real && denominator(v->lit) == 1) return rat_to_string(v->lit) + ".0";
      return rat_to_string(v->lit);
    }
    case VTerm::Tag::EventLit: return v->is_push ? "push" : "pop";
    case VTerm::Tag::Pair: return "(" + pv(v->v1, inst) + ", " + pv(v->v2, inst) + ")";
    case VTerm::Tag::Inl:
      if (v->v1->tag == VTerm::Tag::Unit) return "true";
      return "inl " + pv_atom(v->v1, inst);
    case VTerm::Tag::Inr:
      if (v->v1->tag == VTerm::Tag::Unit) return "false";
      return "inr " + pv_atom(v->v1, inst);
    case VTerm::Tag::Proj1: return "fst " + pv_atom(v->v1, inst);
    case VTerm::Tag::Proj2: return "snd " + pv_atom(v->v1, inst);
    case VTerm::Tag::Lam: return "fun " + display_name(v->binder) + " -> " + pc(v->body, inst);
    case VTerm::Tag::RecFun:
      return "rec " + display_name(v->name) + " " + display_name(v->binder) + " -> " + pc(v->body, inst);
    case VTerm::Tag::Ascribe: return "(" + pv(v->v1, inst) + " : " + pretty(v->ascribed, inst) + ")";
    case VTerm::Tag::OpApp: {
      const std::string& op = v->name;
      if (op == "cons") return pv_atom(v->v1->v1, inst) + " :: " + pv_atom(v->v1->v2, inst);
      if (op == "nil") return "[]";
      if (op == "neg") return "-" + pv_atom(v->v1, inst);
      if (op == "ite") {
        const VPtr& c = v->v1->v1;
        const VPtr& rest = v->v1->v2;
        return "if " + pv(c, inst) + " then " + pv(rest->v1, inst) + " else " + pv(rest->v2, inst);
      }
      if (is_infix_op(op) && v->v1->tag == VTerm::Tag::Pair)
        return pv_atom(v->v1->v1, inst) + " " + op + " " + pv_atom(v->v1->v2, inst);
      if (v->v1->tag == VTerm::Tag::Pair)
        return op + "(" + pv(v->v1->v1, inst) + ", " + pv(v->v1->v2, inst) + ")";
      return op + "(" + pv(v->v1, inst) + ")";
    }
  }
  return "?";
}

std::string pc(const CPtr& c, Instance inst) {
  switch (c->tag) {
    case CTerm::Tag::Return: return "return " + pv_atom(c->v1, inst);
    case CTerm::Tag::App: return pv_atom(c->v1, inst) + " " + pv_atom(c->v2, inst);
    case CTerm::Tag::GenEff: {
      std::string s = c->name + " " + pv_atom(c->v1, inst);
      if (!c->ghosts.empty()) {
        s += " @ghost(";
        for (size_t i = 0; i < c->ghosts.size(); ++i) {
          if (i) s += ", ";
          s += pv(c->ghosts[i], inst);
        }
        s += ")";
      }
      return s;
    }
    case CTerm::Tag::Let: {
      std::string s = "let " + display_name(c->name) + " = " + pc(c->c1, inst) + " in";
      if (c->let_grade) s += "[" + pretty(c->let_grade, inst) + "]";
      return s + " " + pc(c->c2, inst);
    }
    case CTerm::Tag::MatchPair:
      return "match " + pv(c->v1, inst) + " with (" + display_name(c->x) + ", " + display_name(c->y) + ") -> " +
             pc(c->c1, inst);
    case CTerm::Tag::Case: {
      // if-sugar for unit binders over booleans
      return "case " + pv(c->v1, inst) + " of inl " + display_name(c->x) + " -> " + pc(c->c1, inst) + " | inr " +
             display_name(c->y) + " -> " + pc(c->c2, inst) + " end";
    }
    case CTerm::Tag::Ascribe: return "(" + pc(c->c1, inst) + " : " + pretty(c->ascribed, inst) + ")";
  }
  return "?";
}

std::string pf(const FPtr& f, Instance inst, int prec);

std::string pf_atom(const FPtr& f, Instance inst) { return pf(f, inst, 3); }

std::string pf(const FPtr& f, Instance inst, int prec) {
  auto wrap = [&](int node_prec, const std::string& s) { return node_prec < prec ? "(" + s + ")" : s; };
  switch (f->tag) {
    case Fml::Tag::True: return "true";
    case Fml::Tag::False: return "false";
    case Fml::Tag::Atom: {
      if ((f->pred == "=" || f->pred == "<=" || f->pred == "<") && f->arg->tag == VTerm::Tag::Pair)
        return wrap(2, pv_atom(f->arg->v1, inst) + " " + f->pred + " " + pv_atom(f->arg->v2, inst));
      return f->pred + "(" + pv(f->arg, inst) + ")";
    }
    case Fml::Tag::And: return wrap(1, pf(f->f1, inst, 1) + " /\\ " + pf(f->f2, inst, 2));
    case Fml::Tag::Or: return wrap(1, pf(f->f1, inst, 1) + " \\/ " + pf(f->f2, inst, 2));
    case Fml::Tag::Implies: return wrap(0, pf(f->f1, inst, 1) + " => " + pf(f->f2, inst, 0));
    case Fml::Tag::Embed: return "<" + pf(f->f1, inst, 0) + ">";
    case Fml::Tag::Num: return pv_atom(f->arg, inst);
    case Fml::Tag::Add: return wrap(2, pf(f->f1, inst, 2) + " + " + pf(f->f2, inst, 3));
    case Fml::Tag::Sub: return wrap(2, pf(f->f1, inst, 2) + " - " + pf(f->f2, inst, 3));
    case Fml::Tag::Mul: return wrap(3, pf(f->f1, inst, 3) + " * " + pf_atom(f->f2, inst));
  }
  return "?";
}

}  // namespace

std::string pretty(const VPtr& v) { return pv(v, Instance::Cost); }
std::string pretty(const CPtr& c) { return pc(c, Instance::Cost); }
std::string pretty(const FPtr& f, Instance inst) { return pf(f, inst, 0); }

std::string pretty(const EPtr& e, Instance inst) {
  switch (e->tag) {
    case Eff::Tag::Unit: return "1";
    case Eff::Tag::Mul: return pretty(e->e1, inst) + " * " + pretty(e->e2, inst);
    case Eff::Tag::Basic:
      if (e->arg->tag == VTerm::Tag::Unit) return e->be;
      if (e->arg->tag == VTerm::Tag::Pair)
        return e->be + "(" + pv(e->arg->v1, inst) + ", " + pv(e->arg->v2, inst) + ")";
      return e->be + "(" + pv(e->arg, inst) + ")";
  }
  return "?";
}

std::string pretty(const RPtr& t, Instance inst) {
  switch (t->tag) {
    case RType::Tag::RefBase:
      if (t->fml->tag == Fml::Tag::True) return base_name(t->base);
      return "{" + display_name(t->binder) + " : " + base_name(t->base) + " | " + pretty(t->fml, inst) + "}";
    case RType::Tag::DPair:
      return "(" + display_name(t->binder) + " : " + pretty(t->t1, inst) + ") * " + pretty(t->t2, inst);
    case RType::Tag::DFun:
      return "(" + display_name(t->binder) + " : " + pretty(t->t1, inst) + ") -> " + pretty(t->ct, inst);
    case RType::Tag::Sum: {
      auto is_trivial_unit = [](const RPtr& r) {
        return r->tag == RType::Tag::RefBase && r->base == BaseTy::Unit && r->fml->tag == Fml::Tag::True;
      };
      if (is_trivial_unit(t->t1) && is_trivial_unit(t->t2)) return "bool";
      auto side = [&](const RPtr& r) {
        std::string s = pretty(r, inst);
        return r->tag == RType::Tag::RefBase ? s : "(" + s + ")";
      };
      return side(t->t1) + " + " + side(t->t2);
    }
  }
  return "?";
}

std::string pretty(const CTyPtr& t, Instance inst) {
  std::string v = pretty(t->val, inst);
  if (t->val->tag == RType::Tag::DFun || t->val->tag == RType::Tag::DPair) v = "(" + v + ")";
  return "T[" + pretty(t->grade, inst) + "] " + v;
}

std::string pretty(const Program& p) {
  std::ostringstream os;
  os << "#instance " << instance_name(p.instance) << "\n\n";
  for (auto& d : p.decls) {
    if (d.is_computation) {
      os << "val " << d.name << " : " << pretty(d.ctype, p.instance) << "\n";
      if (d.cbody) os << "let " << d.name << " = " << pc(d.cbody, p.instance) << "\n";
    } else {
      os << "val " << d.name << " : " << pretty(d.vtype, p.instance) << "\n";
      if (d.vbody) os << "let " << d.name << " = " << pv(d.vbody, p.instance) << "\n";
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace grady
