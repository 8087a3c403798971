#include "grady/modelcheck.hpp"

#include <functional>
#include <map>
#include <sstream>

namespace grady {

std::string family_name(LiftingFamily f) {
  switch (f) {
    case LiftingFamily::Cost: return "cost";
    case LiftingFamily::Writer: return "writer";
    case LiftingFamily::Dist: return "dist";
  }
  return "?";
}

std::string mutant_name(LiftingMutant m) {
  switch (m) {
    case LiftingMutant::None: return "none";
    case LiftingMutant::StrictUnit: return "strict-unit";
    case LiftingMutant::PaddedMult: return "padded-mult";
    case LiftingMutant::ExactGrade: return "exact-grade";
    case LiftingMutant::StrictBottom: return "strict-bottom";
    case LiftingMutant::FrozenReindex: return "frozen-reindex";
  }
  return "?";
}

namespace {

std::vector<std::set<int>> all_subsets(int n) {
  std::vector<std::set<int>> out;
  for (int mask = 0; mask < (1 << n); ++mask) {
    std::set<int> s;
    for (int i = 0; i < n; ++i)
      if (mask & (1 << i)) s.insert(i);
    out.push_back(std::move(s));
  }
  return out;
}

// ---- cost alphabet: {0, 1, 2, inf-hat} with capped absorbing addition ----------

constexpr int kInf = 3;  // index of the capped top element

int cap_add(int a, int b) {
  if (a == kInf || b == kInf) return kInf;
  int s = a + b;
  return s > 2 ? kInf : s;
}
bool cap_leq(int a, int b) { return a <= b; }

struct CostElem {  // element of T X = X x alphabet
  int x;
  int n;
  bool operator<(const CostElem& o) const { return std::tie(x, n) < std::tie(o.x, o.n); }
};

bool cost_member(LiftingMutant mutant, int grade, const std::set<int>& pred, const CostElem& e) {
  bool in_pred = pred.count(e.x) > 0;
  switch (mutant) {
    case LiftingMutant::StrictUnit: return in_pred && e.n < grade;
    case LiftingMutant::PaddedMult: return in_pred && cap_leq(e.n, cap_add(grade, 1));
    case LiftingMutant::ExactGrade: return in_pred && e.n == grade;
    default: return in_pred && cap_leq(e.n, grade);
  }
}

// ---- writer monad over words of length <= 3 with an overflow sink ---------------

using Word = std::string;  // letters 'a','b'; "!" is the overflow sink

std::vector<Word> all_words() {
  std::vector<Word> out{""};
  std::vector<Word> layer{""};
  for (int len = 1; len <= 3; ++len) {
    std::vector<Word> next;
    for (auto& w : layer)
      for (char c : {'a', 'b'}) next.push_back(w + c);
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  out.push_back("!");
  return out;
}

Word word_concat(const Word& a, const Word& b) {
  if (a == "!" || b == "!" || a.size() + b.size() > 3) return "!";
  return a + b;
}

using Lang = std::set<Word>;

std::vector<Lang> sample_langs() {
  return {
      Lang{""},            // unit
      Lang{"a"},           Lang{"b"},          Lang{"a", "b"},
      Lang{"", "a", "aa"}, Lang{"ab"},         Lang{"", "b"},
      Lang{"aa", "bb"},
  };
}

Lang lang_concat(const Lang& a, const Lang& b) {
  Lang out;
  for (auto& x : a)
    for (auto& y : b) out.insert(word_concat(x, y));
  return out;
}

bool lang_leq(const Lang& a, const Lang& b) {
  for (auto& w : a)
    if (!b.count(w)) return false;
  return true;
}

struct WriterElem {
  Word w;
  int x;
};

bool writer_member(LiftingMutant, const Lang& grade, const std::set<int>& pred, const WriterElem& e) {
  return grade.count(e.w) > 0 && pred.count(e.x) > 0;
}

// ---- finite-support distributions with exact rational masses --------------------

using Dist = std::vector<Rat>;  // indexed by carrier element

std::vector<Dist> half_dists(int n) {
  // all distributions with masses in {0, 1/2, 1} summing to 1
  std::vector<Dist> out;
  std::vector<int> units(static_cast<size_t>(n), 0);
  std::function<void(int, int)> go = [&](int i, int left) {
    if (i == n) {
      if (left == 0) {
        Dist d;
        for (int u : units) d.push_back(Rat(u, 2));
        out.push_back(std::move(d));
      }
      return;
    }
    for (int u = 0; u <= left; ++u) {
      units[static_cast<size_t>(i)] = u;
      go(i + 1, left - u);
    }
    units[static_cast<size_t>(i)] = 0;
  };
  go(0, 2);
  return out;
}

Rat fail_mass(const Dist& d, const std::set<int>& pred) {
  Rat m = 0;
  for (size_t i = 0; i < d.size(); ++i)
    if (!pred.count(static_cast<int>(i))) m += d[i];
  return m;
}

bool dist_member(LiftingMutant mutant, const Rat& beta, const std::set<int>& pred, const Dist& d) {
  Rat fm = fail_mass(d, pred);
  switch (mutant) {
    case LiftingMutant::StrictUnit: return fm < beta;
    case LiftingMutant::PaddedMult: return fm <= beta + Rat(1, 4);
    case LiftingMutant::ExactGrade: return fm == beta;
    default: return fm <= beta;
  }
}

std::vector<Rat> dist_grades() { return {Rat(0), Rat(1, 4), Rat(1, 2), Rat(1)}; }

// ----------------------------------------------------------------------------------

struct Reporter {
  std::vector<LawReport> out;
  std::string spec;
  int universe;
  void law(const std::string& name, bool pass, const std::string& witness = "") {
    out.push_back({spec, name, universe, pass, pass ? "" : witness});
  }
  // records only the first counterexample per law
  struct Check {
    bool ok = true;
    std::string wit;
    void fail(const std::string& w) {
      if (ok) {
        ok = false;
        wit = w;
      }
    }
  };
};

std::vector<LawReport> cost_laws(LiftingMutant mutant, int universe) {
  Reporter rep;
  rep.spec = "cost[" + mutant_name(mutant) + "]";
  rep.universe = universe;
  std::vector<int> grades{0, 1, 2, kInf};

  Reporter::Check unit, mult, mono, strength;
  for (int n = 1; n <= universe; ++n) {
    auto preds = all_subsets(n);
    for (auto& p : preds) {
      // unit: eta(x) = (x, 0) lands in the grade-1 (= 0) lifting
      for (int x : p) {
        if (!cost_member(mutant, 0, p, {x, 0}))
          unit.fail("x=" + std::to_string(x) + " pred=" + std::to_string(p.size()));
      }
      // multiplication: mu maps C_m1 (C_m2 P) into C_{m1+m2} P
      for (int m1 : grades)
        for (int m2 : grades)
          for (int x = 0; x < n; ++x)
            for (int inner : grades)
              for (int outer : grades) {
                CostElem in_elem{x, inner};
                bool outer_ok = cost_member(mutant, m2, p, in_elem);
                // element ((x, inner), outer) of T T X; the outer predicate
                // asks membership of the inner element plus outer <= m1
                bool in_lifted = outer_ok && (mutant == LiftingMutant::StrictUnit   ? outer < m1
                                              : mutant == LiftingMutant::PaddedMult ? cap_leq(outer, cap_add(m1, 1))
                                              : mutant == LiftingMutant::ExactGrade ? outer == m1
                                                                                    : cap_leq(outer, m1));
                if (!in_lifted) continue;
                CostElem joined{x, cap_add(outer, inner)};
                if (!cost_member(mutant, cap_add(m1, m2), p, joined))
                  mult.fail("m1=" + std::to_string(m1) + " m2=" + std::to_string(m2) + " x=" + std::to_string(x) +
                            " n1=" + std::to_string(outer) + " n2=" + std::to_string(inner));
              }
      // monotonicity in the grade
      for (int m1 : grades)
        for (int m2 : grades) {
          if (!cap_leq(m1, m2)) continue;
          for (int x = 0; x < n; ++x)
            for (int a : grades) {
              CostElem e{x, a};
              if (cost_member(mutant, m1, p, e) && !cost_member(mutant, m2, p, e))
                mono.fail("m1=" + std::to_string(m1) + " m2=" + std::to_string(m2) + " elem=(" + std::to_string(x) +
                          "," + std::to_string(a) + ")");
            }
        }
      // strength: P x C_m Q -> C_m (P x Q); pairs coded as x*n + y
      for (auto& q : preds)
        for (int m : grades)
          for (int x : p)
            for (int y = 0; y < n; ++y)
              for (int a : grades) {
                if (!cost_member(mutant, m, q, {y, a})) continue;
                std::set<int> pq;
                for (int i : p)
                  for (int j : q) pq.insert(i * n + j);
                if (!cost_member(mutant, m, pq, {x * n + y, a}))
                  strength.fail("x=" + std::to_string(x) + " y=" + std::to_string(y));
              }
    }
  }
  rep.law("unit", unit.ok, unit.wit);
  rep.law("multiplication", mult.ok, mult.wit);
  rep.law("grade-monotonicity", mono.ok, mono.wit);
  rep.law("strength", strength.ok, strength.wit);
  return rep.out;
}

std::vector<LawReport> writer_laws(LiftingMutant mutant, int universe) {
  Reporter rep;
  rep.spec = "writer[" + mutant_name(mutant) + "]";
  rep.universe = universe;
  auto langs = sample_langs();
  auto words = all_words();

  Reporter::Check unit, mult, mono, strength;
  for (int n = 1; n <= universe; ++n) {
    auto preds = all_subsets(n);
    for (auto& p : preds) {
      for (int x : p)
        if (!writer_member(mutant, Lang{""}, p, {"", x})) unit.fail("x=" + std::to_string(x));
      for (auto& l1 : langs)
        for (auto& l2 : langs)
          for (int x = 0; x < n; ++x)
            for (auto& w1 : words)
              for (auto& w2 : words) {
                bool src = l1.count(w1) && l2.count(w2) && p.count(x);
                if (!src) continue;
                if (!writer_member(mutant, lang_concat(l1, l2), p, {word_concat(w1, w2), x}))
                  mult.fail("w1=" + w1 + " w2=" + w2);
              }
      for (auto& l1 : langs)
        for (auto& l2 : langs) {
          if (!lang_leq(l1, l2)) continue;
          for (int x : p)
            for (auto& w : words)
              if (writer_member(mutant, l1, p, {w, x}) && !writer_member(mutant, l2, p, {w, x}))
                mono.fail("w=" + w);
        }
      for (auto& q : preds)
        for (auto& l : langs)
          for (int x : p)
            for (int y = 0; y < n; ++y)
              for (auto& w : words) {
                if (!writer_member(mutant, l, q, {w, y})) continue;
                std::set<int> pq;
                for (int i : p)
                  for (int j : q) pq.insert(i * n + j);
                if (!writer_member(mutant, l, pq, {w, x * n + y})) strength.fail("w=" + w);
              }
    }
  }
  rep.law("unit", unit.ok, unit.wit);
  rep.law("multiplication", mult.ok, mult.wit);
  rep.law("grade-monotonicity", mono.ok, mono.wit);
  rep.law("strength", strength.ok, strength.wit);
  return rep.out;
}

std::vector<LawReport> dist_laws(LiftingMutant mutant, int universe) {
  Reporter rep;
  rep.spec = "dist[" + mutant_name(mutant) + "]";
  rep.universe = universe;
  auto grades = dist_grades();

  Reporter::Check unit, mult, mono, strength;
  for (int n = 1; n <= universe; ++n) {
    auto preds = all_subsets(n);
    auto dists = half_dists(n);
    for (auto& p : preds) {
      for (int x : p) {
        Dist delta(static_cast<size_t>(n), Rat(0));
        delta[static_cast<size_t>(x)] = 1;
        if (!dist_member(mutant, Rat(0), p, delta)) unit.fail("x=" + std::to_string(x));
      }
      // multiplication: outer distributions over the enumerated inner ones
      auto outer_dists = half_dists(static_cast<int>(dists.size()));
      for (auto& b1 : grades)
        for (auto& b2 : grades)
          for (auto& od : outer_dists) {
            // outer in UB_b1 of (UB_b2 P): mass on bad inner dists <= b1
            Rat bad = 0;
            for (size_t i = 0; i < od.size(); ++i)
              if (od[i] != 0 && !dist_member(mutant, b2, p, dists[i])) bad += od[i];
            bool in_outer = mutant == LiftingMutant::StrictUnit   ? bad < b1
                            : mutant == LiftingMutant::PaddedMult ? bad <= b1 + Rat(1, 4)
                            : mutant == LiftingMutant::ExactGrade ? bad == b1
                                                                  : bad <= b1;
            if (!in_outer) continue;
            Dist flat(static_cast<size_t>(n), Rat(0));
            for (size_t i = 0; i < od.size(); ++i)
              for (int x = 0; x < n; ++x) flat[static_cast<size_t>(x)] += od[i] * dists[i][static_cast<size_t>(x)];
            if (!dist_member(mutant, b1 + b2, p, flat)) mult.fail("join violates the union bound");
          }
      for (auto& b1 : grades)
        for (auto& b2 : grades) {
          if (!(b1 <= b2)) continue;
          for (auto& d : dists)
            if (dist_member(mutant, b1, p, d) && !dist_member(mutant, b2, p, d)) mono.fail("grade monotonicity");
        }
      for (auto& q : preds)
        for (auto& b : grades)
          for (int x : p)
            for (auto& d : dists) {
              if (!dist_member(mutant, b, q, d)) continue;
              // strength: x (x) d over the pair carrier
              Dist paired(static_cast<size_t>(n * n), Rat(0));
              for (int y = 0; y < n; ++y) paired[static_cast<size_t>(x * n + y)] = d[static_cast<size_t>(y)];
              std::set<int> pq;
              for (int i : p)
                for (int j : q) pq.insert(i * n + j);
              if (!dist_member(mutant, b, pq, paired)) strength.fail("strength violates the union bound");
            }
    }
  }
  rep.law("unit", unit.ok, unit.wit);
  rep.law("multiplication", mult.ok, mult.wit);
  rep.law("grade-monotonicity", mono.ok, mono.wit);
  rep.law("strength", strength.ok, strength.wit);
  return rep.out;
}

}  // namespace

std::vector<LawReport> check_graded_monad_laws(LiftingFamily family, LiftingMutant mutant, int universe) {
  switch (family) {
    case LiftingFamily::Cost: return cost_laws(mutant, universe);
    case LiftingFamily::Writer: return writer_laws(mutant, universe);
    case LiftingFamily::Dist: return dist_laws(mutant, universe);
  }
  return {};
}

// ---- reindexing and the indexed construction --------------------------------------

namespace {

struct Family {
  // per index: carrier size, predicate, grade
  std::vector<int> carrier;
  std::vector<std::set<int>> pred;
  std::vector<int> grade;
};

// The index-wise lifted family: per index the set of cost elements admitted.
std::vector<std::set<std::pair<int, int>>> lift_family(const Family& fam, LiftingMutant mutant) {
  std::vector<std::set<std::pair<int, int>>> out;
  for (size_t i = 0; i < fam.carrier.size(); ++i) {
    std::set<std::pair<int, int>> s;
    int g = mutant == LiftingMutant::FrozenReindex ? fam.grade.empty() ? 0 : fam.grade[0] : fam.grade[i];
    for (int x = 0; x < fam.carrier[i]; ++x)
      for (int a : {0, 1, 2, kInf})
        if (cost_member(LiftingMutant::None, g, fam.pred[i], {x, a})) s.insert({x, a});
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

std::vector<LawReport> check_reindexing(LiftingMutant mutant, int universe) {
  Reporter rep;
  rep.spec = "cost-indexed[" + mutant_name(mutant) + "]";
  rep.universe = universe;
  std::vector<int> grades{0, 1, 2, kInf};

  Reporter::Check reix, unit_commute, mult_commute, composite;
  int sizeI = 2, sizeJ = std::min(universe, 3);
  // all functions u : I -> J
  std::vector<std::vector<int>> funcs;
  for (int u0 = 0; u0 < sizeJ; ++u0)
    for (int u1 = 0; u1 < sizeJ; ++u1) funcs.push_back({u0, u1});

  // a deterministic sample of J-indexed families
  std::vector<Family> fams;
  for (int g0 : grades)
    for (int g1 : grades) {
      Family f;
      for (int j = 0; j < sizeJ; ++j) {
        f.carrier.push_back(2);
        f.pred.push_back(j % 2 == 0 ? std::set<int>{0} : std::set<int>{0, 1});
        f.grade.push_back(j == 0 ? g0 : g1);
      }
      fams.push_back(std::move(f));
    }

  for (auto& u : funcs)
    for (auto& fam : fams) {
      // route 1: lift over J, then reindex along u
      auto lifted = lift_family(fam, mutant);
      std::vector<std::set<std::pair<int, int>>> route1;
      for (int i = 0; i < sizeI; ++i) route1.push_back(lifted[static_cast<size_t>(u[static_cast<size_t>(i)])]);
      // route 2: reindex the family, then lift over I
      Family famI;
      for (int i = 0; i < sizeI; ++i) {
        int j = u[static_cast<size_t>(i)];
        famI.carrier.push_back(fam.carrier[static_cast<size_t>(j)]);
        famI.pred.push_back(fam.pred[static_cast<size_t>(j)]);
        famI.grade.push_back(fam.grade[static_cast<size_t>(j)]);
      }
      auto route2 = lift_family(famI, mutant);
      if (route1 != route2) reix.fail("u=(" + std::to_string(u[0]) + "," + std::to_string(u[1]) + ")");

      // unit commutes: eta image of the reindexed predicate equals the
      // reindexing of the eta image
      for (int i = 0; i < sizeI; ++i) {
        int j = u[static_cast<size_t>(i)];
        for (int x : fam.pred[static_cast<size_t>(j)]) {
          bool in1 = route1[static_cast<size_t>(i)].count({x, 0}) > 0;
          bool in2 = route2[static_cast<size_t>(i)].count({x, 0}) > 0;
          if (mutant == LiftingMutant::None && (!in1 || !in2)) unit_commute.fail("eta image escapes");
          if (in1 != in2) unit_commute.fail("eta image differs between routes");
        }
      }
      // multiplication commutes: joining then reindexing equals reindexing
      // then joining, elementwise on cost pairs
      for (int i = 0; i < sizeI; ++i) {
        int j = u[static_cast<size_t>(i)];
        for (int x = 0; x < fam.carrier[static_cast<size_t>(j)]; ++x)
          for (int a : grades)
            for (int b : grades) {
              std::pair<int, int> joined{x, cap_add(a, b)};
              bool in1 = route1[static_cast<size_t>(i)].count(joined) > 0;
              bool in2 = route2[static_cast<size_t>(i)].count(joined) > 0;
              if (in1 != in2) mult_commute.fail("mu image differs between routes");
            }
      }
    }

  // composite-predicate equality of the indexed construction:
  // lambda (i, t). P(i) /\ (C_{f(i)} Q<i,->)(t), two ways
  auto ctx_preds = all_subsets(sizeI);
  for (auto& fam0 : fams) {
    Family fam = fam0;
    fam.carrier.resize(static_cast<size_t>(sizeI));
    fam.pred.resize(static_cast<size_t>(sizeI));
    fam.grade.resize(static_cast<size_t>(sizeI));
    for (auto& P : ctx_preds) {
      auto lifted = lift_family(fam, mutant);
      for (int i = 0; i < sizeI; ++i)
        for (int x = 0; x < fam.carrier[static_cast<size_t>(i)]; ++x)
          for (int a : grades) {
            bool via_construction = P.count(i) > 0 && lifted[static_cast<size_t>(i)].count({x, a}) > 0;
            bool via_formula =
                P.count(i) > 0 &&
                cost_member(LiftingMutant::None, mutant == LiftingMutant::FrozenReindex ? fam.grade[0]
                                                                                        : fam.grade[static_cast<size_t>(i)],
                            fam.pred[static_cast<size_t>(i)], {x, a});
            if (via_construction != via_formula) composite.fail("composite predicate differs");
          }
    }
  }

  rep.law("reindexing-equality", reix.ok, reix.wit);
  rep.law("unit-reindexing", unit_commute.ok, unit_commute.wit);
  rep.law("multiplication-reindexing", mult_commute.ok, mult_commute.wit);
  rep.law("composite-predicate", composite.ok, composite.wit);
  return rep.out;
}

std::vector<LawReport> check_par_distribution(LiftingMutant mutant, int universe) {
  Reporter rep;
  rep.spec = "cost-par[" + mutant_name(mutant) + "]";
  rep.universe = universe;
  std::vector<int> grades{0, 1, 2, kInf};
  const int bottom = -1;

  auto par_pred = [&](const std::set<int>& p) {
    std::set<int> out = p;
    if (mutant != LiftingMutant::StrictBottom) out.insert(bottom);
    return out;
  };

  Reporter::Check admit, distrib;
  for (int n = 1; n <= universe; ++n) {
    for (auto& p : all_subsets(n)) {
      std::set<int> pbot = par_pred(p);
      for (int m : grades) {
        // d(bottom) = eta(bottom) = (bottom, 0) must satisfy C_m (Par P)
        if (!(pbot.count(bottom) && cap_leq(0, m))) admit.fail("bottom rejected at m=" + std::to_string(m));
        // elements of Par (C_m P): bottom and every admitted (x, a)
        for (int x = 0; x < n; ++x)
          for (int a : grades) {
            if (!cost_member(LiftingMutant::None, m, p, {x, a})) continue;
            // d(x, a) = (x, a); membership in C_m over the Par predicate
            if (!(pbot.count(x) && cap_leq(a, m))) distrib.fail("image escapes");
          }
      }
      // the empty predicate still admits bottom
      if (!par_pred({}).count(bottom) && mutant != LiftingMutant::StrictBottom) distrib.fail("empty predicate");
    }
  }
  rep.law("par-bottom-admission", admit.ok, admit.wit);
  rep.law("par-distributive", distrib.ok, distrib.wit);
  return rep.out;
}

std::vector<LawReport> check_restricted_order(int universe) {
  Reporter rep;
  rep.spec = "cost-indexed[restricted-order]";
  rep.universe = universe;
  // index set I = {0,1}, context predicate P = {0}: grades may disagree at 1
  Reporter::Check ok;
  std::vector<int> f{1, 2};  // f(1) = 2 > g(1) = 0: unordered outside P
  std::vector<int> g{2, 0};
  std::set<int> P{0};
  bool leq_on_p = true;
  for (int i : P)
    if (!cap_leq(f[static_cast<size_t>(i)], g[static_cast<size_t>(i)])) leq_on_p = false;
  bool leq_everywhere = true;
  for (int i = 0; i < 2; ++i)
    if (!cap_leq(f[static_cast<size_t>(i)], g[static_cast<size_t>(i)])) leq_everywhere = false;
  if (!leq_on_p || leq_everywhere) ok.fail("witness pair is not restricted-order-only");
  // monotonicity of the composite under the restricted order: the indexed
  // lifting ordered by f <=_P g on the composite predicates
  for (int carrier = 1; carrier <= universe; ++carrier)
    for (auto& q : all_subsets(carrier))
      for (int i = 0; i < 2; ++i)
        for (int x = 0; x < carrier; ++x)
          for (int a : {0, 1, 2, kInf}) {
            bool in_f = P.count(i) && cost_member(LiftingMutant::None, f[static_cast<size_t>(i)], q, {x, a});
            bool in_g = P.count(i) && cost_member(LiftingMutant::None, g[static_cast<size_t>(i)], q, {x, a});
            if (in_f && !in_g) ok.fail("restricted order not respected by the composite");
          }
  rep.law("def14-restricted-order", ok.ok, ok.wit);
  return rep.out;
}

std::vector<LawReport> run_law_lab(const LawLabConfig& cfg) {
  std::vector<LawReport> out;
  auto add = [&](std::vector<LawReport> r) { out.insert(out.end(), r.begin(), r.end()); };
  for (LiftingFamily f : {LiftingFamily::Cost, LiftingFamily::Writer, LiftingFamily::Dist})
    add(check_graded_monad_laws(f, LiftingMutant::None, cfg.universe));
  add(check_reindexing(LiftingMutant::None, cfg.universe));
  add(check_par_distribution(LiftingMutant::None, cfg.universe));
  add(check_restricted_order(cfg.universe));
  if (cfg.with_mutants) {
    add(check_graded_monad_laws(LiftingFamily::Cost, LiftingMutant::StrictUnit, cfg.universe));
    add(check_graded_monad_laws(LiftingFamily::Cost, LiftingMutant::PaddedMult, cfg.universe));
    add(check_graded_monad_laws(LiftingFamily::Cost, LiftingMutant::ExactGrade, cfg.universe));
    add(check_par_distribution(LiftingMutant::StrictBottom, cfg.universe));
    add(check_reindexing(LiftingMutant::FrozenReindex, cfg.universe));
  }
  return out;
}

}  // namespace grady
