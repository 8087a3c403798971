#pragma once

#include <set>
#include <string>
#include <vector>

#include "grady/numeric.hpp"

namespace grady {

// Finite predicate over a carrier {0, ..., carrier-1}.
struct FinitePredicate {
  int carrier = 0;
  std::set<int> subset;
};

struct LawReport {
  std::string spec;  // lifting under test
  std::string law;
  int universe = 0;
  bool pass = true;
  std::string witness;  // replayable description of the first counterexample
};

enum class LiftingFamily { Cost, Writer, Dist };

// Negative controls; each breaks exactly the law it names.
enum class LiftingMutant {
  None,
  StrictUnit,     // requires n < m: breaks the unit law
  PaddedMult,     // admits n <= m+1: breaks the multiplication law
  ExactGrade,     // requires n == m: breaks grade monotonicity
  StrictBottom,   // Par without bottom: breaks the distributive law
  FrozenReindex,  // ignores the reindexed grade: breaks reindexing equality
};

std::string family_name(LiftingFamily f);
std::string mutant_name(LiftingMutant m);

// Graded-monad laws for one lifting: unit, multiplication, grade
// monotonicity, strength. Exhaustive over carriers of size <= universe.
std::vector<LawReport> check_graded_monad_laws(LiftingFamily family, LiftingMutant mutant, int universe);

// Reindexing along every u : I -> J for |I|,|J| <= universe with the cost
// lifting: u* T_f X = T_{f o u} u* X, and unit/multiplication images commute
// with reindexing. Also checks the composite-predicate equality of the
// indexed construction (two evaluation routes).
std::vector<LawReport> check_reindexing(LiftingMutant mutant, int universe);

// Distributive law (T X)_bot -> T (X_bot) for the cost lifting with the
// partial-correctness lifting Par.
std::vector<LawReport> check_par_distribution(LiftingMutant mutant, int universe);

// The predicate-restricted order: grade functions unordered outside P still
// reindex monotonically.
std::vector<LawReport> check_restricted_order(int universe);

struct LawLabConfig {
  int universe = 3;
  bool with_mutants = false;
};

std::vector<LawReport> run_law_lab(const LawLabConfig& cfg);

}  // namespace grady
