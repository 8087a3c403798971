#include "grady/parser.hpp"

#include <cctype>
#include <map>
#include <vector>

#include "grady/effects.hpp"

namespace grady {

namespace {

struct Token {
  enum class Kind { Ident, Number, Sym, Eof };
  Kind kind = Kind::Eof;
  std::string text;
  Rat num;
  bool num_is_real = false;
  int line = 1, col = 1;
};

struct Lexer {
  const std::string& src;
  size_t pos = 0;
  int line = 1, col = 1;
  std::vector<Token> tokens;

  explicit Lexer(const std::string& s) : src(s) {}

  [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, line, col); }

  char peek(size_t k = 0) const { return pos + k < src.size() ? src[pos + k] : '\0'; }

  void advance() {
    if (src[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }

  void skip_ws_comments() {
    while (pos < src.size()) {
      char c = src[pos];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '(' && peek(1) == '*') {
        int depth = 0;
        while (pos < src.size()) {
          if (peek() == '(' && peek(1) == '*') {
            depth++;
            advance();
            advance();
          } else if (peek() == '*' && peek(1) == ')') {
            depth--;
            advance();
            advance();
            if (depth == 0) break;
          } else {
            advance();
          }
        }
        if (depth != 0) fail("unterminated comment");
      } else {
        break;
      }
    }
  }

  void run() {
    static const char* syms[] = {"->", "=>", "<=", "::", "&&", "||", "/\\", "\\/", "@",  "(", ")", "{", "}",
                                 "[",  "]",  ",",  ":",  "|",  "*",  "+",   "-",  "/",  "<", ">", "=", "_"};
    while (true) {
      skip_ws_comments();
      if (pos >= src.size()) break;
      Token t;
      t.line = line;
      t.col = col;
      char c = src[pos];
      if (c == '#' || std::isalpha(static_cast<unsigned char>(c))) {
        std::string id;
        if (c == '#') {
          id += c;
          advance();
        }
        while (pos < src.size() &&
               (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '\'')) {
          id += peek();
          advance();
        }
        t.kind = Token::Kind::Ident;
        t.text = id;
        tokens.push_back(t);
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c))) {
        std::string num;
        bool real = false;
        while (pos < src.size() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.')) {
          if (peek() == '.') {
            if (real) break;
            if (!std::isdigit(static_cast<unsigned char>(peek(1)))) break;
            real = true;
          }
          num += peek();
          advance();
        }
        auto r = rat_from_string(num);
        if (!r) fail("bad numeric literal " + num);
        t.kind = Token::Kind::Number;
        t.num = *r;
        t.num_is_real = real;
        t.text = num;
        tokens.push_back(t);
        continue;
      }
      bool matched = false;
      for (const char* s : syms) {
        size_t n = std::string(s).size();
        if (src.compare(pos, n, s) == 0) {
          // `_` only as a standalone token
          if (s[0] == '_' && (std::isalnum(static_cast<unsigned char>(peek(1))) || peek(1) == '_')) continue;
          t.kind = Token::Kind::Sym;
          t.text = s;
          for (size_t i = 0; i < n; ++i) advance();
          tokens.push_back(t);
          matched = true;
          break;
        }
      }
      if (!matched) fail(std::string("unexpected character '") + c + "'");
    }
    Token eof;
    eof.kind = Token::Kind::Eof;
    eof.line = line;
    eof.col = col;
    tokens.push_back(eof);
  }
};

bool is_keyword(const std::string& s) {
  static const std::set<std::string> kw = {"val",  "let",  "rec", "in",   "if",   "then", "else", "case",
                                           "of",   "inl",  "inr", "match", "with", "fun",  "return", "end",
                                           "true", "false", "fst", "snd",  "not",  "T"};
  return kw.count(s) > 0;
}

struct Scope {
  std::map<std::string, std::vector<std::string>> stack;
  std::string bind(const std::string& surface) {
    std::string uniq = fresh_name(surface == "_" ? "u" : surface);
    stack[surface].push_back(uniq);
    return uniq;
  }
  void unbind(const std::string& surface) {
    auto it = stack.find(surface);
    if (it != stack.end() && !it->second.empty()) {
      it->second.pop_back();
      if (it->second.empty()) stack.erase(it);
    }
  }
  std::string resolve(const std::string& surface) const {
    auto it = stack.find(surface);
    if (it != stack.end() && !it->second.empty()) return it->second.back();
    return surface;  // top-level names and signature symbols pass through
  }
};

struct Parser {
  std::vector<Token> toks;
  size_t ix = 0;
  Instance inst = Instance::Cost;
  const InstanceDescriptor* desc = &instance_descriptor(Instance::Cost);
  Scope scope;

  const Token& cur() const { return toks[ix]; }
  const Token& look(size_t k) const { return toks[std::min(ix + k, toks.size() - 1)]; }
  Span span() const { return Span{cur().line, cur().col}; }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, cur().line, cur().col); }

  bool is_sym(const std::string& s, size_t k = 0) const {
    return look(k).kind == Token::Kind::Sym && look(k).text == s;
  }
  bool is_ident(const std::string& s, size_t k = 0) const {
    return look(k).kind == Token::Kind::Ident && look(k).text == s;
  }
  bool at_ident() const { return cur().kind == Token::Kind::Ident; }

  void eat() { ++ix; }
  void expect_sym(const std::string& s) {
    if (!is_sym(s)) fail("expected '" + s + "'");
    eat();
  }
  void expect_ident(const std::string& s) {
    if (!is_ident(s)) fail("expected '" + s + "'");
    eat();
  }
  std::string take_name() {
    if (cur().kind == Token::Kind::Ident && !is_keyword(cur().text)) {
      std::string n = cur().text;
      eat();
      return n;
    }
    if (is_sym("_")) {
      eat();
      return "_";
    }
    fail("expected identifier");
  }

  // ---- value expressions ----------------------------------------------------

  bool starts_vexpr() const {
    if (cur().kind == Token::Kind::Number) return true;
    if (is_sym("(") || is_sym("[") || is_sym("-")) return true;
    if (cur().kind != Token::Kind::Ident) return false;
    const std::string& s = cur().text;
    if (s == "true" || s == "false" || s == "inl" || s == "inr" || s == "fst" || s == "snd" || s == "not" ||
        s == "fun" || s == "rec" || s == "if" || s == "push" || s == "pop")
      return true;
    return !is_keyword(s);
  }

  VPtr parse_vexpr() { return parse_cons(); }

  VPtr parse_cons() {
    VPtr lhs = parse_or();
    if (is_sym("::")) {
      Span sp = span();
      eat();
      VPtr rhs = parse_cons();
      return v_op("cons", v_pair(lhs, rhs), sp);
    }
    return lhs;
  }

  VPtr parse_or() {
    VPtr lhs = parse_and();
    while (is_sym("||")) {
      Span sp = span();
      eat();
      lhs = v_op("||", v_pair(lhs, parse_and()), sp);
    }
    return lhs;
  }

  VPtr parse_and() {
    VPtr lhs = parse_cmp();
    while (is_sym("&&")) {
      Span sp = span();
      eat();
      lhs = v_op("&&", v_pair(lhs, parse_cmp()), sp);
    }
    return lhs;
  }

  VPtr parse_cmp() {
    VPtr lhs = parse_arith();
    for (const char* op : {"=", "<=", "<"}) {
      if (is_sym(op)) {
        Span sp = span();
        eat();
        return v_op(op, v_pair(lhs, parse_arith()), sp);
      }
    }
    return lhs;
  }

  VPtr parse_arith() {
    VPtr lhs = parse_term();
    while (is_sym("+") || is_sym("-")) {
      std::string op = cur().text;
      Span sp = span();
      eat();
      lhs = v_op(op, v_pair(lhs, parse_term()), sp);
    }
    return lhs;
  }

  VPtr parse_term() {
    VPtr lhs = parse_factor();
    while (is_sym("*") || is_sym("/")) {
      std::string op = cur().text;
      Span sp = span();
      eat();
      lhs = v_op(op, v_pair(lhs, parse_factor()), sp);
    }
    return lhs;
  }

  VPtr parse_factor() {
    Span sp = span();
    if (is_sym("-")) {
      eat();
      return v_op("neg", parse_factor(), sp);
    }
    if (is_ident("not")) {
      eat();
      return v_op("not", parse_factor(), sp);
    }
    if (is_ident("inl")) {
      eat();
      return v_inl(parse_vatom(), sp);
    }
    if (is_ident("inr")) {
      eat();
      return v_inr(parse_vatom(), sp);
    }
    if (is_ident("fst")) {
      eat();
      return v_proj1(parse_vatom(), sp);
    }
    if (is_ident("snd")) {
      eat();
      return v_proj2(parse_vatom(), sp);
    }
    return parse_vatom();
  }

  VPtr parse_vatom() {
    Span sp = span();
    if (cur().kind == Token::Kind::Number) {
      Rat v = cur().num;
      bool real = cur().num_is_real;
      eat();
      return v_lit(v, real, sp);
    }
    if (is_ident("true")) {
      eat();
      return v_inl(v_unit(sp), sp);
    }
    if (is_ident("false")) {
      eat();
      return v_inr(v_unit(sp), sp);
    }
    if (is_ident("push")) {
      eat();
      return v_event(true, sp);
    }
    if (is_ident("pop")) {
      eat();
      return v_event(false, sp);
    }
    if (is_ident("if")) {
      eat();
      VPtr c = parse_vexpr();
      expect_ident("then");
      VPtr t = parse_vexpr();
      expect_ident("else");
      VPtr e = parse_vexpr();
      return v_op("ite", v_pair(c, v_pair(t, e)), sp);
    }
    if (is_ident("fun")) {
      eat();
      std::vector<std::string> params;
      while (at_ident() && !is_keyword(cur().text)) params.push_back(take_name());
      if (params.empty() && is_sym("_")) params.push_back(take_name());
      expect_sym("->");
      return parse_fun_body(params, "", sp);
    }
    if (is_ident("rec")) {
      eat();
      std::string f = take_name();
      std::vector<std::string> params;
      while ((at_ident() && !is_keyword(cur().text)) || is_sym("_")) params.push_back(take_name());
      expect_sym("->");
      return parse_fun_body(params, f, sp);
    }
    if (is_sym("[")) {
      eat();
      expect_sym("]");
      return v_op("nil", v_unit(sp), sp);
    }
    if (is_sym("(")) {
      eat();
      if (is_sym(")")) {
        eat();
        return v_unit(sp);
      }
      VPtr first = parse_vexpr();
      if (is_sym(",")) {
        std::vector<VPtr> items{first};
        while (is_sym(",")) {
          eat();
          items.push_back(parse_vexpr());
        }
        expect_sym(")");
        VPtr acc = items.back();
        for (size_t i = items.size() - 1; i-- > 0;) acc = v_pair(items[i], acc, sp);
        return acc;
      }
      if (is_sym(":")) {
        eat();
        RPtr t = parse_reftype_();
        expect_sym(")");
        return v_ascribe(first, t, sp);
      }
      expect_sym(")");
      return first;
    }
    if (at_ident() && !is_keyword(cur().text)) {
      std::string name = cur().text;
      eat();
      if (is_sym("(")) {
        // call-style effect-free operation
        eat();
        std::vector<VPtr> args;
        if (!is_sym(")")) {
          args.push_back(parse_vexpr());
          while (is_sym(",")) {
            eat();
            args.push_back(parse_vexpr());
          }
        }
        expect_sym(")");
        if (args.empty()) return v_op(name, v_unit(sp), sp);
        VPtr acc = args.back();
        for (size_t i = args.size() - 1; i-- > 0;) acc = v_pair(args[i], acc, sp);
        return v_op(name, acc, sp);
      }
      return v_var(scope.resolve(name), sp);
    }
    fail("expected value expression");
  }

  VPtr parse_fun_body(const std::vector<std::string>& params, const std::string& recname, Span sp) {
    if (params.empty()) fail("function needs at least one parameter");
    std::string rn;
    if (!recname.empty()) rn = scope.bind(recname);
    std::vector<std::string> uniq;
    for (auto& p : params) uniq.push_back(scope.bind(p));
    CPtr body = parse_comp();
    for (auto it = params.rbegin(); it != params.rend(); ++it) scope.unbind(*it);
    if (!recname.empty()) scope.unbind(recname);
    if (params.size() > 1) {
      // pair-structured parameter: right-nested matches
      // match tup with (x0, r0) -> match r0 with (x1, r1) -> ... -> body
      std::string tup = fresh_name("p");
      std::vector<std::string> rests;
      for (size_t i = 0; i + 2 < params.size(); ++i) rests.push_back(fresh_name("p"));
      CPtr m = body;
      for (size_t i = params.size() - 1; i-- > 0;) {
        std::string scrut = i == 0 ? tup : rests[i - 1];
        std::string rhs = (i + 2 == params.size()) ? uniq[i + 1] : rests[i];
        m = c_matchpair(v_var(scrut, sp), uniq[i], rhs, m, sp);
      }
      if (recname.empty()) return v_lam(tup, m, sp);
      return v_recfun(rn, tup, m, sp);
    }
    if (recname.empty()) return v_lam(uniq[0], body, sp);
    return v_recfun(rn, uniq[0], body, sp);
  }

  // ---- computations ----------------------------------------------------------

  CPtr parse_comp() {
    Span sp = span();
    if (is_ident("return")) {
      eat();
      return c_return(parse_vexpr(), sp);
    }
    if (is_ident("let")) {
      eat();
      std::string x = take_name();
      expect_sym("=");
      CPtr head = parse_comp();
      expect_ident("in");
      EPtr grade;
      if (is_sym("[")) {
        eat();
        grade = parse_eff();
        expect_sym("]");
      }
      std::string ux = scope.bind(x);
      CPtr body = parse_comp();
      scope.unbind(x);
      return c_let(ux, head, body, grade, sp);
    }
    if (is_ident("if")) {
      // could be a computation conditional; ground ite only occurs inside
      // formulas/effects, so `if` at computation level is always case sugar
      eat();
      VPtr scrut = parse_vexpr();
      expect_ident("then");
      std::string ut = scope.bind("_");
      CPtr thenc = parse_comp();
      scope.unbind("_");
      expect_ident("else");
      std::string uf = scope.bind("_");
      CPtr elsec = parse_comp();
      scope.unbind("_");
      return c_case(scrut, ut, thenc, uf, elsec, sp);
    }
    if (is_ident("case")) {
      eat();
      VPtr scrut = parse_vexpr();
      expect_ident("of");
      if (is_sym("|")) eat();
      expect_ident("inl");
      std::string x = take_name();
      expect_sym("->");
      std::string ux = scope.bind(x);
      CPtr l = parse_comp();
      scope.unbind(x);
      expect_sym("|");
      expect_ident("inr");
      std::string y = take_name();
      expect_sym("->");
      std::string uy = scope.bind(y);
      CPtr r = parse_comp();
      scope.unbind(y);
      if (is_ident("end")) eat();
      return c_case(scrut, ux, l, uy, r, sp);
    }
    if (is_ident("match")) {
      eat();
      VPtr scrut = parse_vexpr();
      expect_ident("with");
      expect_sym("(");
      std::string x = take_name();
      expect_sym(",");
      std::string y = take_name();
      expect_sym(")");
      expect_sym("->");
      std::string ux = scope.bind(x), uy = scope.bind(y);
      CPtr body = parse_comp();
      scope.unbind(y);
      scope.unbind(x);
      return c_matchpair(scrut, ux, uy, body, sp);
    }
    // generic effect application
    if (at_ident() && desc->sigs.has_geneff(cur().text)) {
      std::string g = cur().text;
      eat();
      std::vector<VPtr> args;
      while (starts_vexpr()) args.push_back(parse_vatom());
      if (args.empty()) fail("generic effect needs an argument");
      VPtr acc = args.back();
      for (size_t i = args.size() - 1; i-- > 0;) acc = v_pair(args[i], acc, sp);
      std::vector<VPtr> ghosts;
      if (is_sym("@")) {
        eat();
        expect_ident("ghost");
        expect_sym("(");
        if (!is_sym(")")) {
          ghosts.push_back(parse_vexpr());
          while (is_sym(",")) {
            eat();
            ghosts.push_back(parse_vexpr());
          }
        }
        expect_sym(")");
      }
      return c_geneff(g, acc, ghosts, sp);
    }
    if (is_sym("(")) {
      // try parenthesized / ascribed computation, else fall back to a value
      size_t save = ix;
      eat();
      try {
        CPtr m = parse_comp();
        if (is_sym(":")) {
          eat();
          CTyPtr t = parse_ctype();
          expect_sym(")");
          m = c_ascribe(m, t, sp);
        } else {
          expect_sym(")");
        }
        if (starts_vexpr()) fail("unexpected application of a computation");
        return m;
      } catch (const ParseError&) {
        ix = save;
      }
    }
    // application: fn atom+
    if (starts_vexpr()) {
      VPtr fn = parse_vatom();
      std::vector<VPtr> args;
      while (starts_vexpr()) args.push_back(parse_vatom());
      if (args.empty()) fail("expected computation (a bare value is not a computation)");
      VPtr acc = args.back();
      for (size_t i = args.size() - 1; i-- > 0;) acc = v_pair(args[i], acc, sp);
      return c_app(fn, acc, sp);
    }
    fail("expected computation");
  }

  // ---- formulas ---------------------------------------------------------------

  bool is_cmp_top(const VPtr& v) const {
    return v->tag == VTerm::Tag::OpApp && (v->name == "=" || v->name == "<=" || v->name == "<");
  }

  FPtr vexpr_to_atom(const VPtr& v) {
    if (is_cmp_top(v)) return f_atom(v->name, v->v1);
    if (v->tag == VTerm::Tag::OpApp && !desc->sigs.pred_overloads(v->name).empty())
      return f_atom(v->name, v->v1);
    fail("expected a formula atom");
  }

  FPtr parse_fml2() {  // two-valued formulas
    FPtr lhs = parse_fml2_or();
    if (is_sym("=>")) {
      eat();
      return f_implies(lhs, parse_fml2());
    }
    return lhs;
  }
  FPtr parse_fml2_or() {
    FPtr lhs = parse_fml2_and();
    while (is_sym("\\/")) {
      eat();
      lhs = f_or(lhs, parse_fml2_and());
    }
    return lhs;
  }
  FPtr parse_fml2_and() {
    FPtr lhs = parse_fml2_atom();
    while (is_sym("/\\")) {
      eat();
      lhs = f_and(lhs, parse_fml2_atom());
    }
    return lhs;
  }
  FPtr parse_fml2_atom() {
    if (is_ident("true") && !is_cmp_continuation()) {
      eat();
      return f_true();
    }
    if (is_ident("false") && !is_cmp_continuation()) {
      eat();
      return f_false();
    }
    if (is_sym("(")) {
      size_t save = ix;
      eat();
      try {
        FPtr f = parse_fml2();
        expect_sym(")");
        if (expr_continues()) throw ParseError("formula parenthesis followed by expression", cur().line, cur().col);
        return f;
      } catch (const ParseError&) {
        ix = save;
      }
    }
    return vexpr_to_atom(parse_vexpr());
  }
  // `true = x` style atoms: the keyword is a value when a comparison follows.
  bool is_cmp_continuation() const { return is_sym("=", 1) || is_sym("<=", 1) || is_sym("<", 1); }
  bool expr_continues() const {
    return is_sym("+") || is_sym("-") || is_sym("*") || is_sym("/") || is_sym("=") || is_sym("<=") || is_sym("<") ||
           is_sym("::");
  }

  FPtr parse_efml() {  // extended-real formulas (expect instance)
    FPtr lhs = parse_efml_and();
    while (is_sym("\\/")) {
      eat();
      lhs = f_or(lhs, parse_efml_and());
    }
    return lhs;
  }
  FPtr parse_efml_and() {
    FPtr lhs = parse_efml_atom();
    while (is_sym("/\\")) {
      eat();
      lhs = f_and(lhs, parse_efml_atom());
    }
    return lhs;
  }
  FPtr parse_efml_atom() {
    if (is_sym("<")) {
      eat();
      FPtr inner = parse_fml2();
      expect_sym(">");
      return f_embed(inner);
    }
    if (is_ident("true")) {
      eat();
      return f_true();
    }
    if (is_ident("false")) {
      eat();
      return f_false();
    }
    if (is_sym("(")) {
      size_t save = ix;
      eat();
      try {
        FPtr f = parse_efml();
        expect_sym(")");
        if (expr_continues()) throw ParseError("grouped formula followed by expression", cur().line, cur().col);
        return f;
      } catch (const ParseError&) {
        ix = save;
      }
    }
    VPtr v = parse_vexpr();
    if (is_cmp_top(v)) fail("comparisons must be embedded as <...> in expectation formulas");
    return f_num(v);
  }

  FPtr parse_fml() { return inst == Instance::Expect ? parse_efml() : parse_fml2(); }

  // ---- effects ----------------------------------------------------------------

  EPtr parse_eff() {
    // `1` alone is the unit effect
    if (cur().kind == Token::Kind::Number && cur().num == 1 && !cur().num_is_real &&
        (is_sym("]", 1) || is_sym("*", 1) || look(1).kind == Token::Kind::Eof)) {
      return parse_eff_strict();
    }
    if (at_ident() && (desc->sigs.has_basic_effect(cur().text))) return parse_eff_strict();
    // otherwise: one ground expression auto-wrapped in the numeric embedding
    VPtr g = parse_vexpr();
    switch (inst) {
      case Instance::Cost: return e_basic("nat2eff", g);
      case Instance::Ubound:
      case Instance::Expect: return e_basic("r2eff", g);
      case Instance::Temporal: fail("temporal effects must use push/pop/stack(...)");
    }
    fail("bad effect");
  }

  EPtr parse_eff_strict() {
    EPtr lhs = parse_eff_atom();
    while (is_sym("*")) {
      eat();
      lhs = e_mul(lhs, parse_eff_atom());
    }
    return lhs;
  }

  EPtr parse_eff_atom() {
    Span sp = span();
    if (cur().kind == Token::Kind::Number && cur().num == 1 && !cur().num_is_real) {
      eat();
      return e_unit();
    }
    if (is_sym("(")) {
      eat();
      EPtr e = parse_eff_strict();
      expect_sym(")");
      return e;
    }
    if (at_ident() && desc->sigs.has_basic_effect(cur().text)) {
      std::string be = cur().text;
      eat();
      if (is_sym("(")) {
        eat();
        std::vector<VPtr> args;
        if (!is_sym(")")) {
          args.push_back(parse_vexpr());
          while (is_sym(",")) {
            eat();
            args.push_back(parse_vexpr());
          }
        }
        expect_sym(")");
        VPtr acc = v_unit(sp);
        if (!args.empty()) {
          acc = args.back();
          for (size_t i = args.size() - 1; i-- > 0;) acc = v_pair(args[i], acc, sp);
        }
        return e_basic(be, acc);
      }
      return e_basic(be, v_unit(sp));
    }
    fail("expected effect");
  }

  // ---- refinement types ---------------------------------------------------------

  RPtr base_shorthand(const std::string& name) {
    if (name == "int") return r_base(BaseTy::Int);
    if (name == "real") return r_base(BaseTy::Real);
    if (name == "unit") return r_base(BaseTy::Unit);
    if (name == "event") return r_base(BaseTy::Event);
    if (name == "list") return r_base(BaseTy::List);
    if (name == "list_list") return r_base(BaseTy::ListList);
    if (name == "bool") return r_bool();
    if (name == "nat") {
      std::string b = fresh_name("n");
      return r_refbase(b, BaseTy::Int, f_atom("<=", v_pair(v_lit(Rat(0), false), v_var(b))));
    }
    fail("unknown base type " + name);
  }

  std::optional<BaseTy> base_of(const std::string& name) {
    if (name == "int") return BaseTy::Int;
    if (name == "real") return BaseTy::Real;
    if (name == "unit") return BaseTy::Unit;
    if (name == "event") return BaseTy::Event;
    if (name == "list") return BaseTy::List;
    if (name == "list_list") return BaseTy::ListList;
    return std::nullopt;
  }

  CTyPtr parse_ctype() {
    expect_ident("T");
    expect_sym("[");
    EPtr e = parse_eff();
    expect_sym("]");
    RPtr v = parse_reftype_();
    return c_type(e, v);
  }

  RPtr parse_reftype_() { return parse_rt_sum(); }

  RPtr parse_rt_sum() {
    RPtr lhs = parse_rt_arrow();
    while (is_sym("+")) {
      eat();
      lhs = r_sum(lhs, parse_rt_arrow());
    }
    return lhs;
  }

  struct NamedComp {
    std::string surface;  // empty when unnamed
    std::string uniq;
    RPtr type;
  };

  RPtr parse_rt_arrow() {
    std::vector<NamedComp> comps;
    comps.push_back(parse_rt_component());
    while (is_sym("*")) {
      eat();
      comps.push_back(parse_rt_component());
    }
    bool arrow = is_sym("->");
    if (!arrow) {
      for (auto& c : comps)
        if (!c.surface.empty()) scope.unbind(c.surface);
      RPtr acc = comps.back().type;
      for (size_t i = comps.size() - 1; i-- > 0;) acc = r_dpair(comps[i].uniq, comps[i].type, acc);
      return acc;
    }
    eat();
    CTyPtr cod = parse_ctype();
    for (auto it = comps.rbegin(); it != comps.rend(); ++it)
      if (!it->surface.empty()) scope.unbind(it->surface);
    if (comps.size() == 1) return r_dfun(comps[0].uniq, comps[0].type, cod);
    // pair-structured domain: component names become projections of the tuple
    std::string tup = fresh_name("p");
    VPtr path = v_var(tup);
    for (size_t i = 0; i < comps.size(); ++i) {
      VPtr proj = i + 1 == comps.size() ? path : v_proj1(path);
      cod = subst(cod, comps[i].uniq, proj);
      path = v_proj2(path);
    }
    RPtr dom = comps.back().type;
    for (size_t i = comps.size() - 1; i-- > 0;) dom = r_dpair(comps[i].uniq, comps[i].type, dom);
    return r_dfun(tup, dom, cod);
  }

  NamedComp parse_rt_component() {
    if (is_sym("(")) {
      size_t save = ix;
      eat();
      if (cur().kind == Token::Kind::Ident && !is_keyword(cur().text) && is_sym(":", 1)) {
        std::string surface = take_name();
        expect_sym(":");
        std::string uniq = scope.bind(surface);
        RPtr t = parse_reftype_();
        expect_sym(")");
        return {surface, uniq, t};
      }
      ix = save;
    }
    RPtr t = parse_rt_atom();
    return {"", fresh_name("q"), t};
  }

  RPtr parse_rt_atom() {
    if (is_sym("{")) {
      eat();
      std::string surface = take_name();
      expect_sym(":");
      std::string bname = cur().kind == Token::Kind::Ident ? cur().text : "";
      auto b = base_of(bname);
      if (!b) fail("expected base type");
      eat();
      expect_sym("|");
      std::string uniq = scope.bind(surface);
      FPtr f = parse_fml();
      scope.unbind(surface);
      expect_sym("}");
      return r_refbase(uniq, *b, f);
    }
    if (is_sym("(")) {
      eat();
      RPtr t = parse_reftype_();
      expect_sym(")");
      return t;
    }
    if (at_ident()) {
      std::string n = cur().text;
      eat();
      return base_shorthand(n);
    }
    fail("expected type");
  }

  // ---- declarations ---------------------------------------------------------------

  Program parse_program_() {
    Program p;
    if (!is_ident("#instance")) fail("file must start with `#instance <cost|temporal|ubound|expect>`");
    eat();
    if (!at_ident()) fail("expected instance name");
    auto in = instance_from_name(cur().text);
    if (!in) fail("unknown instance " + cur().text);
    inst = *in;
    desc = &instance_descriptor(inst);
    p.instance = inst;
    eat();

    std::map<std::string, size_t> pending_val;  // name -> decl index
    std::set<std::string> names;
    while (cur().kind != Token::Kind::Eof) {
      if (is_ident("val")) {
        Span sp = span();
        eat();
        std::string name = take_name();
        if (names.count(name)) fail("duplicate top-level name " + name);
        names.insert(name);
        expect_sym(":");
        Decl d;
        d.name = name;
        d.span = sp;
        if (is_ident("T")) {
          d.is_computation = true;
          d.ctype = parse_ctype();
        } else {
          d.vtype = parse_reftype_();
        }
        pending_val[name] = p.decls.size();
        p.decls.push_back(std::move(d));
        continue;
      }
      if (is_ident("let")) {
        Span sp = span();
        eat();
        bool is_rec = false;
        if (is_ident("rec")) {
          is_rec = true;
          eat();
        }
        std::string name = take_name();
        std::vector<std::string> params;
        while ((at_ident() && !is_keyword(cur().text)) || is_sym("_")) params.push_back(take_name());
        Decl* d = nullptr;
        Decl fresh_decl;
        auto it = pending_val.find(name);
        if (is_sym(":")) {
          eat();
          if (names.count(name)) fail("duplicate top-level name " + name);
          names.insert(name);
          fresh_decl.name = name;
          fresh_decl.span = sp;
          if (is_ident("T")) {
            fresh_decl.is_computation = true;
            fresh_decl.ctype = parse_ctype();
          } else {
            fresh_decl.vtype = parse_reftype_();
          }
          p.decls.push_back(std::move(fresh_decl));
          d = &p.decls.back();
        } else {
          if (it == pending_val.end()) fail("top-level `let " + name + "` needs a prior `val` annotation");
          d = &p.decls[it->second];
        }
        expect_sym("=");
        if (d->is_computation) {
          if (!params.empty()) fail("computation declarations take no parameters");
          d->cbody = parse_comp();
        } else if (!params.empty() || is_rec) {
          if (params.empty()) fail("recursive declaration needs parameters");
          Span fs = span();
          d->vbody = parse_fun_body(params, is_rec ? name : "", fs);
        } else {
          d->vbody = parse_vexpr();
        }
        continue;
      }
      fail("expected `val` or `let` declaration");
    }
    return p;
  }
};

}  // namespace

Program parse_program(const std::string& source, const std::string& source_name) {
  Lexer lx(source);
  lx.run();
  Parser ps;
  ps.toks = std::move(lx.tokens);
  Program p = ps.parse_program_();
  p.source_name = source_name;
  return p;
}

namespace {
Parser make_subparser(const std::string& source, Instance inst) {
  Lexer lx(source);
  lx.run();
  Parser ps;
  ps.toks = std::move(lx.tokens);
  ps.inst = inst;
  ps.desc = &instance_descriptor(inst);
  return ps;
}
}  // namespace

VPtr parse_value_term(const std::string& source, Instance inst) {
  Parser ps = make_subparser(source, inst);
  VPtr v = ps.parse_vexpr();
  if (ps.cur().kind != Token::Kind::Eof) ps.fail("trailing input");
  return v;
}
FPtr parse_formula(const std::string& source, Instance inst) {
  Parser ps = make_subparser(source, inst);
  FPtr f = ps.parse_fml();
  if (ps.cur().kind != Token::Kind::Eof) ps.fail("trailing input");
  return f;
}
EPtr parse_effect(const std::string& source, Instance inst) {
  Parser ps = make_subparser(source, inst);
  EPtr e = ps.parse_eff();
  if (ps.cur().kind != Token::Kind::Eof) ps.fail("trailing input");
  return e;
}
RPtr parse_reftype(const std::string& source, Instance inst) {
  Parser ps = make_subparser(source, inst);
  RPtr t = ps.parse_reftype_();
  if (ps.cur().kind != Token::Kind::Eof) ps.fail("trailing input");
  return t;
}

}  // namespace grady
