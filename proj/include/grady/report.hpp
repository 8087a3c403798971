#pragma once

#include <string>
#include <vector>

#include "grady/constraints.hpp"
#include "grady/modelcheck.hpp"
#include "grady/soundness.hpp"
#include "grady/typecheck.hpp"

namespace grady {

// Machine-readable dumps; field order is fixed so equal inputs yield
// byte-identical output.
std::string obligation_json(const Obligation& ob, Instance inst);
std::string check_report_json(const TypedProgram& tp, const std::vector<std::pair<Obligation, DischargeResult>>& results);
std::string soundness_json(const SoundnessReport& rep);
std::string laws_json(const std::vector<LawReport>& reps);
std::string outcome_json(const Outcome& o);
std::string distribution_json(const Distribution& d);

}  // namespace grady
