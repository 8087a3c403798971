#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "grady/constraints.hpp"
#include "grady/modelcheck.hpp"
#include "grady/parser.hpp"
#include "grady/pretty.hpp"
#include "grady/report.hpp"
#include "grady/soundness.hpp"

using namespace grady;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string basename_of(const std::string& path) {
  auto pos = path.find_last_of('/');
  std::string base = pos == std::string::npos ? path : path.substr(pos + 1);
  auto dot = base.find_last_of('.');
  return dot == std::string::npos ? base : base.substr(0, dot);
}

unsigned long long default_seed() {
  if (const char* env = std::getenv("GRADY_SEED")) {
    try {
      return std::stoull(env);
    } catch (...) {
    }
  }
  return 42;
}

struct CommonOpts {
  long fuel = 64;
  long trials = 10000;
  unsigned long long seed = default_seed();
  long grid_bound = 64;
  long grid_density = 8;
  double delta = 1e-3;
  bool json = false;
  std::string emit_smt;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--fuel", o.fuel, "recursion fuel");
  cmd->add_option("--trials", o.trials, "Monte-Carlo trials");
  cmd->add_option("--seed", o.seed, "random seed (default: GRADY_SEED or 42)");
  cmd->add_option("--grid-bound", o.grid_bound, "grid bound B");
  cmd->add_option("--grid-density", o.grid_density, "real grid density q");
  cmd->add_option("--delta", o.delta, "Hoeffding confidence parameter");
  cmd->add_flag("--json", o.json, "machine-readable output");
}

// parses e.g. "n=5,x=2,l=[1,2],t=true" into runtime values
std::vector<std::pair<std::string, RtPtr>> parse_env(const std::string& s, Instance inst) {
  std::vector<std::pair<std::string, RtPtr>> out;
  size_t pos = 0;
  while (pos < s.size()) {
    size_t eq = s.find('=', pos);
    if (eq == std::string::npos) throw std::runtime_error("bad --env entry");
    std::string name = s.substr(pos, eq - pos);
    size_t end = eq + 1;
    int depth = 0;
    while (end < s.size() && (s[end] != ',' || depth > 0)) {
      if (s[end] == '[' || s[end] == '(') ++depth;
      if (s[end] == ']' || s[end] == ')') --depth;
      ++end;
    }
    std::string text = s.substr(eq + 1, end - eq - 1);
    VPtr term = parse_value_term(text, inst);
    out.emplace_back(name, eval_ground(term, nullptr));
    pos = end < s.size() ? end + 1 : end;
  }
  return out;
}

int cmd_check(const std::vector<std::string>& files, const CommonOpts& opts) {
  int exit_code = 0;
  for (auto& path : files) {
    TypedProgram tp;
    try {
      Program p = parse_program(slurp(path), path);
      tp = check_program(p);
    } catch (const std::exception& e) {
      std::cerr << path << ": error: " << e.what() << "\n";
      return 1;
    }
    DomainBounds bounds;
    bounds.int_bound = opts.grid_bound;
    bounds.real_density = opts.grid_density;
    const InstanceDescriptor& inst = instance_descriptor(tp.instance);
    std::vector<std::pair<Obligation, DischargeResult>> results;
    bool all_valid = true;
    for (auto& ob : tp.obligations) {
      DischargeResult res = discharge_bounded(ob, bounds, inst);
      if (res.kind != DischargeResult::Kind::Valid) all_valid = false;
      results.emplace_back(ob, res);
    }
    if (!opts.emit_smt.empty()) {
      for (auto& ob : tp.obligations) {
        std::string why;
        auto script = emit_smtlib(ob, inst, &why);
        std::string fname = opts.emit_smt + "/" + basename_of(path) + "." + std::to_string(ob.id) + ".smt2";
        std::ofstream out(fname);
        if (script)
          out << *script;
        else
          out << "; untranslatable: " << why << "\n";
      }
    }
    if (opts.json) {
      std::cout << check_report_json(tp, results) << "\n";
    } else {
      long valid = 0;
      for (auto& [ob, res] : results) {
        if (res.kind == DischargeResult::Kind::Valid) {
          ++valid;
          continue;
        }
        std::cout << path << ":" << ob.span.line << ":" << ob.span.col << ": obligation " << ob.id << " ["
                  << ob.rule << "] ";
        if (res.kind == DischargeResult::Kind::Counterexample) {
          std::cout << "counterexample:";
          for (auto& [n, v] : res.cex) std::cout << " " << display_name(n) << "=" << rt_to_string(v);
        } else {
          std::cout << "unknown: " << res.reason;
        }
        std::cout << "\n";
      }
      std::cout << path << ": " << valid << "/" << results.size() << " obligations valid on the grid\n";
    }
    if (!all_valid) exit_code = 2;
  }
  return exit_code;
}

int cmd_run(const std::string& path, const std::string& entry, const std::string& env_text,
            const std::string& arg_text, const CommonOpts& opts, bool dist_mode) {
  Program p = parse_program(slurp(path), path);
  TypedProgram tp = check_program(p);
  auto targets = runnable_targets(tp);
  const RunTarget* target = nullptr;
  std::string name = entry;
  if (name.empty() && !targets.empty()) name = targets.back().name;
  for (auto& t : targets)
    if (t.name == name) target = &t;
  if (!target) {
    std::cerr << "no runnable target " << name << "\n";
    return 1;
  }
  EnvAssignment a;
  a.params = parse_env(env_text, tp.instance);
  if (!arg_text.empty()) {
    VPtr term = parse_value_term(arg_text, tp.instance);
    a.arg = eval_ground(term, nullptr);
  }
  if (dist_mode) {
    Distribution d = dist_target(tp, name, a, opts.fuel);
    std::cout << distribution_json(d) << "\n";
    return 0;
  }
  Rng rng(opts.seed);
  Outcome o = run_target(tp, name, a, opts.fuel, rng);
  std::cout << outcome_json(o) << "\n";
  return 0;
}

int cmd_soundness(const std::vector<std::string>& files, const CommonOpts& opts) {
  bool any_fail = false;
  SoundnessReport all;
  for (auto& path : files) {
    TypedProgram tp;
    try {
      Program p = parse_program(slurp(path), path);
      tp = check_program(p);
    } catch (const std::exception& e) {
      std::cerr << path << ": error: " << e.what() << "\n";
      return 1;
    }
    SoundnessConfig cfg;
    cfg.fuel = opts.fuel;
    cfg.trials = opts.trials;
    cfg.seed = opts.seed;
    cfg.delta = opts.delta;
    if (tp.instance == Instance::Ubound) cfg.max_envs = 12;  // sampled paths are costly
    SoundnessReport rep = run_soundness(tp, cfg);
    if (!rep.all_pass()) any_fail = true;
    all.rows.insert(all.rows.end(), rep.rows.begin(), rep.rows.end());
  }
  if (opts.json) {
    std::cout << soundness_json(all) << "\n";
  } else {
    for (auto& r : all.rows) {
      if (r.skipped) continue;
      if (!r.pass)
        std::cout << "FAIL " << r.program << " " << r.target << " [" << r.env << "] grade=" << r.grade
                  << " observed=" << r.observed << " " << r.note << "\n";
    }
    std::cout << all.passed() << " pass, " << all.failed() << " fail, " << all.skipped() << " skipped\n";
  }
  return any_fail ? 3 : 0;
}

int cmd_laws(int universe, bool with_mutants, const std::string& dump_witness, bool json_out) {
  LawLabConfig cfg;
  cfg.universe = universe;
  cfg.with_mutants = with_mutants;
  auto reps = run_law_lab(cfg);
  bool any_fail = false;
  for (auto& r : reps)
    if (!r.pass) any_fail = true;
  if (json_out) {
    std::cout << laws_json(reps) << "\n";
  } else {
    for (auto& r : reps)
      std::cout << (r.pass ? "PASS" : "FAIL") << "  " << r.spec << "  " << r.law << "\n";
  }
  if (!dump_witness.empty()) {
    std::ofstream out(dump_witness);
    out << laws_json(reps) << "\n";
  }
  return any_fail ? 4 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"grady: checker and instrumented evaluator for value-dependent effect grades"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::vector<std::string> files;

  auto* check = app.add_subcommand("check", "type-check and discharge obligations");
  check->add_option("files", files)->required();
  add_common(check, opts);
  check->add_option("--emit-smt", opts.emit_smt, "directory for SMT-LIB2 scripts");

  auto* run = app.add_subcommand("run", "evaluate a program");
  std::string entry, env_text, arg_text;
  run->add_option("file", files);
  run->add_option("--entry", entry, "target declaration (default: last runnable)");
  run->add_option("--env", env_text, "context parameter values, e.g. n=5");
  run->add_option("--arg", arg_text, "argument value for the target");
  add_common(run, opts);

  auto* dist = app.add_subcommand("dist", "exact output distribution");
  dist->add_option("file", files);
  dist->add_option("--entry", entry);
  dist->add_option("--env", env_text);
  dist->add_option("--arg", arg_text);
  add_common(dist, opts);

  auto* soundness = app.add_subcommand("soundness", "run the dynamic soundness matrix");
  soundness->add_option("files", files)->required();
  add_common(soundness, opts);

  auto* laws = app.add_subcommand("laws", "finite-model law lab");
  int universe = 3;
  bool with_mutants = false;
  std::string dump_witness;
  bool laws_json_flag = false;
  laws->add_option("--universe", universe, "maximum carrier size");
  laws->add_flag("--with-mutants", with_mutants, "include the negative controls");
  laws->add_option("--dump-witness", dump_witness, "serialize reports to a file");
  laws->add_flag("--json", laws_json_flag);

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) return cmd_check(files, opts);
    if (run->parsed()) return cmd_run(files.at(0), entry, env_text, arg_text, opts, false);
    if (dist->parsed()) return cmd_run(files.at(0), entry, env_text, arg_text, opts, true);
    if (soundness->parsed()) return cmd_soundness(files, opts);
    if (laws->parsed()) return cmd_laws(universe, with_mutants, dump_witness, laws_json_flag);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
