#include "grady/report.hpp"

#include <json.hpp>

#include "grady/pretty.hpp"

namespace grady {

using json = nlohmann::ordered_json;

namespace {

json ob_to_json(const Obligation& ob, Instance inst) {
  json j;
  j["id"] = ob.id;
  j["rule"] = ob.rule;
  j["span"] = {{"line", ob.span.line}, {"col", ob.span.col}};
  json ctx = json::array();
  for (auto& e : ob.ctx) ctx.push_back({{"name", display_name(e.name)}, {"type", pretty(e.type, inst)}});
  j["context"] = ctx;
  if (ob.kind == Obligation::Kind::Implication) {
    j["kind"] = "implication";
    json payload;
    if (ob.has_binder) payload["binder"] = display_name(ob.binder) + " : " + base_name(ob.binder_base);
    payload["lhs"] = pretty(ob.lhs, inst);
    payload["rhs"] = pretty(ob.rhs, inst);
    j["payload"] = payload;
  } else {
    j["kind"] = "subeffect";
    j["payload"] = {{"e1", pretty(ob.e1, inst)}, {"e2", pretty(ob.e2, inst)}};
  }
  return j;
}

json cex_to_json(const CexEnv& cex) {
  json j = json::array();
  for (auto& [n, v] : cex) j.push_back({{"name", display_name(n)}, {"value", rt_to_string(v)}});
  return j;
}

}  // namespace

std::string obligation_json(const Obligation& ob, Instance inst) { return ob_to_json(ob, inst).dump(); }

std::string check_report_json(const TypedProgram& tp,
                              const std::vector<std::pair<Obligation, DischargeResult>>& results) {
  json j;
  j["file"] = tp.source_name;
  j["instance"] = instance_name(tp.instance);
  j["obligations"] = json::array();
  long valid = 0, cex = 0, unknown = 0;
  for (auto& [ob, res] : results) {
    json o = ob_to_json(ob, tp.instance);
    switch (res.kind) {
      case DischargeResult::Kind::Valid:
        o["result"] = "valid-on-grid";
        o["method"] = res.method;
        ++valid;
        break;
      case DischargeResult::Kind::Counterexample:
        o["result"] = "counterexample";
        o["method"] = res.method;
        o["counterexample"] = cex_to_json(res.cex);
        ++cex;
        break;
      case DischargeResult::Kind::Unknown:
        o["result"] = "unknown";
        o["reason"] = res.reason;
        ++unknown;
        break;
    }
    j["obligations"].push_back(std::move(o));
  }
  j["summary"] = {{"valid", valid}, {"counterexamples", cex}, {"unknown", unknown}};
  return j.dump(2);
}

std::string soundness_json(const SoundnessReport& rep) {
  json j;
  j["rows"] = json::array();
  for (auto& r : rep.rows) {
    json row;
    row["program"] = r.program;
    row["target"] = r.target;
    row["env"] = r.env;
    row["seed"] = r.seed;
    row["grade"] = r.grade;
    row["observed"] = r.observed;
    row["tolerance"] = r.tolerance;
    row["verdict"] = r.skipped ? "skipped" : (r.pass ? "pass" : "fail");
    if (!r.note.empty()) row["note"] = r.note;
    j["rows"].push_back(std::move(row));
  }
  j["summary"] = {{"pass", rep.passed()}, {"fail", rep.failed()}, {"skipped", rep.skipped()}};
  return j.dump(2);
}

std::string laws_json(const std::vector<LawReport>& reps) {
  json j = json::array();
  for (auto& r : reps) {
    json row;
    row["spec"] = r.spec;
    row["law"] = r.law;
    row["universe"] = r.universe;
    row["pass"] = r.pass;
    if (!r.witness.empty()) row["witness"] = r.witness;
    j.push_back(std::move(row));
  }
  return j.dump(2);
}

std::string outcome_json(const Outcome& o) {
  json j;
  j["outcome"] = o.converged ? "converged" : "bottom";
  j["value"] = o.converged ? rt_to_string(o.value) : "";
  j["trace"] = o.trace.to_string();
  j["fuel_used"] = o.fuel_used;
  return j.dump(2);
}

std::string distribution_json(const Distribution& d) {
  json j = json::array();
  for (auto& e : d.entries) {
    json row;
    row["value"] = e.bottom ? "bottom" : rt_to_string(e.value);
    row["mass"] = rat_to_string(e.mass);
    j.push_back(std::move(row));
  }
  return j.dump(2);
}

}  // namespace grady
