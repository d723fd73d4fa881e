// phl: command-line front end for the interpreter, the transformers and the checkers.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "phl/config.hpp"
#include "phl/interp.hpp"
#include "phl/logic.hpp"
#include "phl/parser.hpp"
#include "phl/preterm.hpp"
#include "phl/printer.hpp"
#include "phl/proofsys.hpp"
#include "phl/wp.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace phl;

constexpr int kOk = 0;
constexpr int kRefuted = 1;
constexpr int kUsage = 2;

struct Options {
  std::optional<long> loop_bound;
  std::optional<int> unroll;
  std::optional<int> depth;
  std::string int_window;
  std::string quant_window;
  std::optional<std::uint64_t> seed;
  std::string format = "json";
  std::string dists;
  std::string triple;
  std::string program;
  std::string state;
  std::string post;
  std::string formula;
  std::string derivation;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Config make_config(const Options& o) {
  Config cfg;
  if (const char* path = std::getenv("PHL_CONFIG"); path != nullptr && *path != '\0') cfg.merge_json(read_file(path));
  if (o.loop_bound) cfg.loop_bound = *o.loop_bound;
  if (o.unroll) cfg.unroll = *o.unroll;
  if (o.depth) cfg.depth = *o.depth;
  if (!o.int_window.empty()) cfg.int_window = parse_range(o.int_window);
  if (!o.quant_window.empty()) cfg.quant_window = parse_range(o.quant_window);
  if (o.seed) cfg.seed = *o.seed;
  cfg.validate();
  return cfg;
}

std::vector<SubDistribution> user_dists(const Options& o) {
  if (o.dists.empty()) return {};
  return parse_distributions_json(read_file(o.dists));
}

// Initial distributions for run and pt: --state, else --dists.
std::vector<SubDistribution> initial(const Options& o) {
  if (!o.state.empty()) return {SubDistribution::point(parse_state(o.state))};
  return user_dists(o);
}

json state_json(const State& s) {
  json vars = json::object();
  for (const auto& [k, v] : s.values()) vars[k] = v.to_string();
  return vars;
}

json dist_json(const SubDistribution& mu) {
  json states = json::array();
  for (const auto& [s, p] : mu.entries()) states.push_back({{"vars", state_json(s)}, {"prob", p.to_string()}});
  return states;
}

json interp_json(const Interpretation& i) {
  json logical = json::object();
  for (const auto& [k, v] : i.logical) logical[k] = v.to_string();
  json real = json::object();
  for (const auto& [k, v] : i.real) real[k] = v.to_string();
  return {{"logical", logical}, {"real", real}};
}

json verdict_json(const Verdict& v) {
  json j{{"verdict", std::string(to_string(v.kind))}, {"scope", v.scope}};
  if (v.kind == Verdict::Kind::holds_up_to_residual) j["residual"] = v.residual.to_string();
  if (v.kind == Verdict::Kind::counterexample) {
    json cx = json::object();
    if (v.state) cx["state"] = state_json(*v.state);
    if (v.dist) cx["distribution"] = dist_json(*v.dist);
    if (v.interp) cx["interpretation"] = interp_json(*v.interp);
    j["counterexample"] = std::move(cx);
  }
  if (!v.detail.empty()) j["detail"] = v.detail;
  return j;
}

json exec_json(const ExecResult& r) {
  return {{"states", dist_json(r.output)},
          {"residual", r.residual_mass.to_string()},
          {"iterations", r.iterations_used},
          {"exact", r.exact},
          {"final", r.output_final()}};
}

std::string exec_text(const ExecResult& r) {
  std::string out;
  for (const auto& [s, p] : r.output.entries()) out += s.to_string() + ": " + p.to_string() + "\n";
  out += "residual: " + r.residual_mass.to_string() + "\n";
  out += "iterations: " + std::to_string(r.iterations_used) + "\n";
  out += std::string("exact: ") + (r.exact ? "true" : "false") + "\n";
  out += std::string("final: ") + (r.output_final() ? "true" : "false") + "\n";
  return out;
}

json loops_json(const std::vector<WhileExpansion>& loops) {
  json arr = json::array();
  for (const auto& l : loops) {
    arr.push_back({{"guard", to_string(l.guard)},
                   {"K", l.K},
                   {"D", l.D},
                   {"exhaustive", l.exhaustive},
                   {"size_limited", l.size_limited},
                   {"budget_limited", l.budget_limited}});
  }
  return arr;
}

void emit(const Options& o, const json& j, const std::string& text) {
  if (o.format == "json") {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << text;
  }
}

void require(const std::string& value, const char* flag) {
  if (value.empty()) throw CLI::RequiredError(flag);
}

int cmd_run(const Options& o) {
  require(o.program, "--program");
  const Config cfg = make_config(o);
  const Command c = parse_command(o.program);
  const auto inputs = initial(o);
  if (inputs.empty()) throw CLI::RequiredError("--state or --dists");
  json runs = json::array();
  std::string text;
  for (const auto& mu : inputs) {
    const auto r = exec(c, mu, cfg.loop_bound);
    runs.push_back(exec_json(r));
    text += exec_text(r);
  }
  emit(o, inputs.size() == 1 ? runs[0] : json{{"runs", runs}}, text);
  return kOk;
}

int cmd_wp(const Options& o) {
  require(o.program, "--program");
  require(o.post, "--post");
  const Config cfg = make_config(o);
  const auto r = wp(parse_command(o.program), parse_det_formula(o.post), WpOptions::from(cfg));
  json loops = json::array();
  std::string text = to_string(r.formula) + "\n";
  for (const auto& l : r.loops) {
    json t{{"guard", to_string(l.guard)},
           {"iterations", static_cast<int>(l.psi.size()) - 1},
           {"converged", l.converged},
           {"window_closed", l.window_closed},
           {"size_limited", l.size_limited}};
    t["fixpoint_index"] = l.fixpoint_index ? json(*l.fixpoint_index) : json(nullptr);
    text += "loop " + to_string(l.guard) + ": " +
            (l.converged ? "fixpoint at " + std::to_string(*l.fixpoint_index) : std::string("not converged")) +
            (l.window_closed ? "" : ", window not closed") + "\n";
    loops.push_back(std::move(t));
  }
  emit(o, {{"wp", to_string(r.formula)}, {"converged", r.converged()}, {"loops", loops}}, text);
  return kOk;
}

int cmd_pt(const Options& o) {
  require(o.program, "--program");
  require(o.formula, "--formula");
  const Config cfg = make_config(o);
  const Command c = parse_command(o.program);
  const RealExpr r = parse_real_expr(o.formula);
  const auto res = pt(c, r, PtOptions::from(cfg));
  json j{{"pt", to_string(res.expr)},
         {"exact", res.exact()},
         {"linear_fallbacks", res.linear_fallbacks},
         {"loops", loops_json(res.loops)}};
  std::string text = to_string(res.expr) + "\n";
  text += std::string("exact: ") + (res.exact() ? "true" : "false") + "\n";
  const auto inputs = initial(o);
  if (!inputs.empty()) {
    json values = json::array();
    for (const auto& mu : inputs) {
      const auto v = eval_real(res.expr, mu, {}, cfg.quant_window);
      const auto run = exec(c, mu, cfg.loop_bound);
      const auto sem = eval_real(r, run.output, {}, cfg.quant_window);
      values.push_back({{"value", v.to_string()}, {"semantic", sem.to_string()}, {"final", run.output_final()}});
      text += "value: " + v.to_string() + " (semantic " + sem.to_string() + ")\n";
    }
    j["values"] = std::move(values);
  }
  emit(o, j, text);
  return kOk;
}

int cmd_wpp(const Options& o) {
  require(o.program, "--program");
  require(o.post, "--post");
  const Config cfg = make_config(o);
  const auto r = wpp(parse_command(o.program), parse_prob_formula(o.post), PtOptions::from(cfg));
  emit(o,
       {{"wp", to_string(r.formula)},
        {"exact", r.exact()},
        {"linear_fallbacks", r.linear_fallbacks},
        {"loops", loops_json(r.loops)}},
       to_string(r.formula) + "\n" + "exact: " + (r.exact() ? "true" : "false") + "\n");
  return kOk;
}

int cmd_check(const Options& o) {
  require(o.triple, "--triple");
  const Config cfg = make_config(o);
  std::vector<std::string> warnings;
  const SourceTriple t = parse_triple(o.triple, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  NameSet vars;
  std::visit([&](const auto& f) { collect_prog_vars(f, vars); }, t.pre);
  std::visit([&](const auto& f) { collect_prog_vars(f, vars); }, t.post);
  collect_prog_vars(t.command, vars);
  Verdict v;
  if (t.flavor == Flavor::deterministic) {
    v = check_triple_det(t.det_pre(), t.command, t.det_post(), cfg);
  } else {
    v = check_triple_prob(t.prob_pre(), t.command, t.prob_post(), default_family(vars, cfg, user_dists(o)), cfg);
  }
  emit(o, verdict_json(v), v.summary() + "\n");
  return v.ok() ? kOk : kRefuted;
}

int cmd_prove(const Options& o) {
  if (o.derivation.empty() == o.triple.empty()) throw CLI::ValidationError("prove", "give exactly one of --derivation or --triple");
  const Config cfg = make_config(o);
  const Derivation d = o.derivation.empty() ? canonical_derivation(parse_triple(o.triple), cfg)
                                            : parse_derivation_json(read_file(o.derivation));
  const auto check = check_derivation(d, cfg, user_dists(o));
  json j{{"verdict", check.accepted ? "accepted" : "rejected"}, {"scope", check.scope}, {"nodes", check.nodes}};
  std::string text = std::string(check.accepted ? "accepted " : "rejected ") + check.scope + "\n";
  if (!check.accepted) {
    j["node"] = check.node;
    j["reason"] = check.reason;
    text += check.node + ": " + check.reason + "\n";
    if (check.counterexample) {
      j["counterexample"] = verdict_json(*check.counterexample);
      text += check.counterexample->summary() + "\n";
    }
  }
  j["notes"] = check.notes;
  for (const auto& n : check.notes) text += "note: " + n + "\n";
  if (!o.triple.empty()) j["derivation"] = json::parse(to_json(d));
  emit(o, j, text);
  return check.accepted ? kOk : kRefuted;
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--loop-bound", o.loop_bound, "Iteration bound for loop execution");
  sub->add_option("--unroll", o.unroll, "Unrolling depth K");
  sub->add_option("--depth", o.depth, "Series depth D");
  sub->add_option("--int-window", o.int_window, "Integer window MIN..MAX");
  sub->add_option("--quant-window", o.quant_window, "Quantifier window MIN..MAX");
  sub->add_option("--seed", o.seed, "Distribution family seed");
  sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  sub->add_option("--dists", o.dists, "JSON file with distributions");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Probabilistic Hoare logic toolkit"};
  app.require_subcommand(1);
  Options o;

  auto* run = app.add_subcommand("run", "Execute a program on a state or distribution");
  add_common(run, o);
  run->add_option("--program", o.program, "Program text");
  run->add_option("--state", o.state, "Initial state, e.g. \"X=0, Y=1\"");

  auto* wp_cmd = app.add_subcommand("wp", "Weakest precondition of a deterministic postcondition");
  add_common(wp_cmd, o);
  wp_cmd->add_option("--program", o.program, "Program text");
  wp_cmd->add_option("--post", o.post, "Postcondition");

  auto* pt_cmd = app.add_subcommand("pt", "Weakest preterm of a real expression");
  add_common(pt_cmd, o);
  pt_cmd->add_option("--program", o.program, "Program text");
  pt_cmd->add_option("--formula", o.formula, "Real expression");
  pt_cmd->add_option("--state", o.state, "Evaluate on this state");

  auto* wpp_cmd = app.add_subcommand("wpp", "WP of a probabilistic postcondition");
  add_common(wpp_cmd, o);
  wpp_cmd->add_option("--program", o.program, "Program text");
  wpp_cmd->add_option("--post", o.post, "Probabilistic postcondition");

  auto* check = app.add_subcommand("check", "Check a Hoare triple");
  add_common(check, o);
  check->add_option("--triple", o.triple, "Triple text");

  auto* prove = app.add_subcommand("prove", "Check a derivation file, or the canonical derivation of a triple");
  add_common(prove, o);
  prove->add_option("--derivation", o.derivation, "Derivation JSON file");
  prove->add_option("--triple", o.triple, "Triple text");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (run->parsed()) return cmd_run(o);
    if (wp_cmd->parsed()) return cmd_wp(o);
    if (pt_cmd->parsed()) return cmd_pt(o);
    if (wpp_cmd->parsed()) return cmd_wpp(o);
    if (check->parsed()) return cmd_check(o);
    if (prove->parsed()) return cmd_prove(o);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
