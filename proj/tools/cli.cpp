#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "mksys/laws/suites.hpp"
#include "mksys/model/model.hpp"

namespace mksys::cli {

namespace {

struct Usage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Style {
  bool color = false;
  std::string pass() const { return color ? "\033[32mPASS\033[0m" : "PASS"; }
  std::string fail() const { return color ? "\033[31mFAIL\033[0m" : "FAIL"; }
  std::string warn() const { return color ? "\033[33mwarning\033[0m" : "warning"; }
};

Style style_from_env() {
  const char* v = std::getenv("MKSYS_COLOR");
  return {v && *v && std::string(v) != "0" && std::string(v) != "never"};
}

std::string pick_system(const Model& m, const std::string& requested) {
  if (!requested.empty()) return requested;
  const auto names = m.names("systems");
  if (names.size() != 1) throw Usage("the model has " + std::to_string(names.size()) + " systems; pass --system");
  return names.front();
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Usage("cannot write " + path);
  f << text;
}

int cmd_check(const std::string& path, std::ostream& out, const Style& st) {
  const auto m = Model::load(path);
  const auto findings = check_model(m);
  std::size_t entities = 0;
  for (const auto& s : Model::sections()) entities += m.names(s).size();
  for (const auto& f : findings) out << st.fail() << ' ' << f.entity << ": " << f.law << ": " << f.detail << '\n';
  if (!findings.empty()) return 1;
  out << st.pass() << ' ' << entities << " entities valid\n";
  return 0;
}

int cmd_unroll(const std::string& path, const std::string& system, std::optional<std::size_t> horizon,
               const std::string& format, const std::string& out_path, std::ostream& out) {
  const auto m = Model::load(path);
  const auto name = pick_system(m, system);
  const auto kind = m.entry("systems", name).value("kind", "");
  std::optional<std::size_t> build;
  if (horizon && kind != "indexed") build = std::max<std::size_t>(*horizon, 1);
  ModelSystem s;
  try {
    s = m.system(name, build ? build : horizon);
  } catch (const ShapeMismatch& e) {
    throw ShapeMismatch("systems/" + name + ": " + e.what());
  }
  if (!s.initial) throw ShapeMismatch("systems/" + name + " has no initial law");
  const auto upto = horizon.value_or(s.sys.horizon());
  GTrajectory traj;
  try {
    traj = unroll_trajectory(s.sys, *s.initial, s.policy);
  } catch (const Error& e) {
    throw ShapeMismatch("systems/" + name + ": " + e.what());
  }
  std::ostringstream text;
  if (format == "json") text << emit_json(s.sys, traj, upto).dump(2) << '\n';
  else emit_csv(text, s.sys, traj, upto);
  write_output(out_path, text.str(), out);
  return 0;
}

int cmd_compose(const std::string& path, const std::vector<std::string>& names, bool use_nabla,
                const std::string& new_name, const std::string& out_path, std::ostream& out, std::ostream& err,
                const Style& st) {
  auto m = Model::load(path);
  std::string name = new_name;
  if (use_nabla) {
    if (names.size() != 3) throw Usage("--nabla needs SQUARE1 SQUARE2 CHART");
    const auto sq = nabla(m.sys_square(names[0]), m.sys_square(names[1]), m.chart(names[2]));
    if (name.empty()) name = names[0] + "." + names[1];
    m.put("sys_squares", name, sys_xy_to_json(sq));
  } else {
    if (names.size() != 2) throw Usage("compose needs SYSTEM WIRING");
    const auto s = m.system(names[0]);
    const auto w = m.wiring(names[1], s.sys);
    const auto composed = compose_system_with_lens(s.sys, w);
    if (name.empty()) name = names[0] + "." + names[1];
    m.put("systems", name, system_to_json(composed));
  }
  const auto recheck = check_model(Model(m.doc()));
  for (const auto& f : recheck) err << st.fail() << ' ' << f.entity << ": " << f.law << ": " << f.detail << '\n';
  if (!recheck.empty()) return 1;
  write_output(out_path, m.dump(), out);
  return 0;
}

int cmd_laws(const std::vector<std::string>& suites, std::size_t cases, std::uint64_t seed, std::size_t max_size,
             std::size_t max_horizon, unsigned threads, bool json, std::ostream& out, std::ostream& err,
             const Style& st) {
  std::vector<std::string> run = suites;
  if (run.empty() || (run.size() == 1 && run[0] == "all")) run = suite_names();
  for (const auto& s : run)
    if (std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end())
      throw UnknownSuite("unknown suite '" + s + "'");
  if (cases == 0) err << st.warn() << ": zero cases requested; the run passes trivially\n";
  bool ok = true;
  Json all = Json::array();
  for (const auto& s : run) {
    LawSuiteConfig cfg{s, cases, seed, max_size, max_horizon, threads};
    const auto r = run_suite(cfg);
    ok = ok && r.ok();
    if (json) {
      all.push_back(suite_result_to_json(r));
      continue;
    }
    out << (r.ok() ? st.pass() : st.fail()) << ' ' << s << ": " << r.passed << '/' << r.cases << " cases, "
        << r.checks << " checks, seed " << seed << '\n';
    for (const auto& n : r.notes) out << "  note: " << n << '\n';
    if (r.first_failure) {
      out << "  first failure: case " << *r.first_failure << ": " << r.detail << '\n';
      out << "  counterexample:\n" << r.counterexample.dump(2) << '\n';
    }
  }
  if (json) out << all.dump(2) << '\n';
  return ok ? 0 : 1;
}

int cmd_diagnose(const std::string& path, const std::string& system, const std::string& wiring, bool json,
                 std::ostream& out, const Style& st) {
  const auto m = Model::load(path);
  const auto name = pick_system(m, system);
  const auto s = m.system(name);
  if (!s.initial) throw ShapeMismatch("systems/" + name + " has no initial law");
  const auto traj = unroll_trajectory(s.sys, *s.initial, s.policy);
  const auto direct = check_time_coherence(s.sys, traj);
  Json rep = {{"system", name}, {"coherent", direct.ok()}, {"edges", direct.edges}};
  bool ok = direct.ok();
  if (!wiring.empty()) {
    const auto w = m.wiring(wiring, s.sys);
    const auto choice = m.couplings(wiring).value_or(fibre_uniform_choice(s.sys, w));
    const auto lifted = lift_trajectory(s.sys, traj, w, wiring_cells(s.sys, traj, w, choice));
    const auto outer = compose_system_with_lens(s.sys, w);
    const auto lc = check_time_coherence(outer, lifted);
    const auto fact = factorization_check(lifted, s.sys, w);
    Json edges = Json::array();
    for (const auto& e : fact.edges)
      edges.push_back({{"t_valid", e.t_valid},
                       {"t12_valid", e.t12_valid},
                       {"generated", e.generated},
                       {"independent", e.independent},
                       {"equal", e.equal},
                       {"detail", e.detail}});
    rep["lifted"] = {{"wiring", wiring},
                     {"coherent", lc.ok()},
                     {"edges", lc.edges},
                     {"independence", lift_displays_independence(s.sys, w, lifted)},
                     {"factorization", {{"ok", fact.ok()}, {"edges", edges}}}};
    ok = ok && lc.ok() && fact.ok();
  }
  if (json) {
    out << rep.dump(2) << '\n';
    return ok ? 0 : 1;
  }
  auto line = [&](bool pass, const std::string& what) { out << (pass ? st.pass() : st.fail()) << ' ' << what << '\n'; };
  auto edges_text = [](const std::vector<bool>& e) {
    std::string t;
    for (std::size_t n = 0; n < e.size(); ++n) t += (n ? " " : "") + std::to_string(n) + (e[n] ? ":ok" : ":broken");
    return t.empty() ? std::string("no edges") : t;
  };
  line(direct.ok(), "time coherence of " + name + " (" + edges_text(direct.edges) + ")");
  if (rep.contains("lifted")) {
    const auto& l = rep["lifted"];
    line(l["coherent"], "time coherence through " + wiring + " (" + edges_text(l["edges"]) + ")");
    out << "  independence i2 ⊥ s | (o1, i1): " << (l["independence"].get<bool>() ? "holds" : "fails") << '\n';
    line(l["factorization"]["ok"], "factorization");
    std::size_t n = 0;
    for (const auto& e : l["factorization"]["edges"]) {
      out << "  edge " << n++ << ": generated=" << e["generated"] << " independent=" << e["independent"]
          << " equal=" << e["equal"];
      if (!e["detail"].get<std::string>().empty()) out << " (" << e["detail"].get<std::string>() << ")";
      out << '\n';
    }
  }
  return ok ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const Style st = style_from_env();
  CLI::App app{"Exact finite Markov-category models: check, unroll, compose, laws", "mksys"};
  app.require_subcommand(1);

  std::string model, system, wiring, format = "csv", out_path, new_name;
  std::optional<std::size_t> horizon;
  std::vector<std::string> names, suites;
  bool use_nabla = false, json = false;
  std::size_t cases = 100, max_size = 0, max_horizon = 3;
  std::uint64_t seed = 1;
  unsigned threads = 0;

  auto* check = app.add_subcommand("check", "Run every validator on a model file");
  check->add_option("model", model, "Model file")->required();

  auto* unroll = app.add_subcommand("unroll", "Write the joint tables phi^n, s^n, p^n");
  unroll->add_option("model", model, "Model file")->required();
  unroll->add_option("--system", system, "System name (default: the only one)");
  unroll->add_option("--horizon", horizon, "Last node N");
  unroll->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  unroll->add_option("--out", out_path, "Output path (default: stdout)");

  auto* compose = app.add_subcommand("compose", "Wire a system through a wiring, or build a tensor behavior");
  compose->add_option("model", model, "Model file")->required();
  compose->add_option("names", names, "SYSTEM WIRING, or SQUARE1 SQUARE2 CHART with --nabla")->required();
  compose->add_flag("--nabla", use_nabla, "Tensor behavior of two squares over a joint chart");
  compose->add_option("--name", new_name, "Name for the new entity");
  compose->add_option("--out", out_path, "Output model path (default: stdout)");

  auto* laws = app.add_subcommand("laws", "Run seeded law suites");
  laws->add_option("--suite", suites, "Suite name, repeatable; 'all' for every suite");
  laws->add_option("--cases", cases, "Cases per suite");
  laws->add_option("--seed", seed, "Random seed");
  laws->add_option("--max-size", max_size, "Largest object size (0: suite default)");
  laws->add_option("--max-horizon", max_horizon, "Largest horizon")->check(CLI::PositiveNumber);
  laws->add_option("--threads", threads, "Worker threads (0: hardware)");
  laws->add_flag("--json", json, "Machine-readable summary");

  auto* diag = app.add_subcommand("trajectory-diagnose", "Time coherence and factorization of a trajectory");
  diag->add_option("model", model, "Model file")->required();
  diag->add_option("--system", system, "System name (default: the only one)");
  diag->add_option("--wiring", wiring, "Lift the trajectory through this wiring");
  diag->add_flag("--json", json, "Machine-readable report");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();  // program name
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (check->parsed()) return cmd_check(model, out, st);
    if (unroll->parsed()) return cmd_unroll(model, system, horizon, format, out_path, out);
    if (compose->parsed()) return cmd_compose(model, names, use_nabla, new_name, out_path, out, err, st);
    if (laws->parsed()) return cmd_laws(suites, cases, seed, max_size, max_horizon, threads, json, out, err, st);
    if (diag->parsed()) return cmd_diagnose(model, system, wiring, json, out, st);
  } catch (const Usage& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const UnknownSuite& e) {
    err << "unknown suite: " << e.what() << "\navailable:";
    for (const auto& s : suite_names()) err << ' ' << s;
    err << '\n';
    return 2;
  } catch (const PreconditionViolation& e) {
    err << "precondition violated: " << e.what() << '\n';
    return 1;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << '\n';
    return 1;
  } catch (const ShapeMismatch& e) {
    err << "shape mismatch: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const Json::exception& e) {
    err << "parse error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace mksys::cli
