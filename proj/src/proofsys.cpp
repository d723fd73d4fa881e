#include "phl/proofsys.hpp"

#include <array>
#include <json.hpp>

#include "phl/generate.hpp"
#include "phl/interp.hpp"
#include "phl/preterm.hpp"
#include "phl/printer.hpp"
#include "phl/simplify.hpp"
#include "phl/wp.hpp"

namespace phl {

namespace {

constexpr std::array<std::string_view, 9> kRuleNames = {"SKIP", "AS", "PAS", "SEQ", "IF", "CONS", "AND", "OR", "WHILE"};

using json = nlohmann::ordered_json;

}  // namespace

std::string_view to_string(Rule r) { return kRuleNames[static_cast<std::size_t>(r)]; }

Rule parse_rule(std::string_view name) {
  for (std::size_t i = 0; i < kRuleNames.size(); ++i) {
    if (kRuleNames[i] == name) return static_cast<Rule>(i);
  }
  throw Error("unknown rule '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// JSON

namespace {

Derivation node_from_json(const json& j, const std::string& path) {
  if (!j.is_object()) throw Error(path + ": derivation node must be an object");
  for (const auto& [key, _] : j.items()) {
    if (key != "rule" && key != "conclusion" && key != "premises" && key != "side") {
      throw Error(path + ": unknown key '" + key + "'");
    }
  }
  if (!j.contains("rule") || !j["rule"].is_string()) throw Error(path + ": missing string field 'rule'");
  if (!j.contains("conclusion") || !j["conclusion"].is_string()) {
    throw Error(path + ": missing string field 'conclusion'");
  }
  Derivation d;
  d.rule = parse_rule(j["rule"].get<std::string>());
  d.conclusion = parse_triple(j["conclusion"].get<std::string>());
  if (j.contains("premises")) {
    if (!j["premises"].is_array()) throw Error(path + ": 'premises' must be a list");
    for (std::size_t i = 0; i < j["premises"].size(); ++i) {
      d.premises.push_back(node_from_json(j["premises"][i], path + ".premises[" + std::to_string(i) + "]"));
    }
  }
  if (j.contains("side")) {
    if (!j["side"].is_array()) throw Error(path + ": 'side' must be a list");
    for (const auto& s : j["side"]) {
      if (!s.is_string()) throw Error(path + ": side conditions must be strings");
      const auto text = s.get<std::string>();
      if (d.conclusion.flavor == Flavor::deterministic) {
        d.side.emplace_back(parse_det_formula(text));
      } else {
        d.side.emplace_back(parse_prob_formula(text));
      }
    }
  }
  return d;
}

json to_json_value(const Derivation& d) {
  json j;
  j["rule"] = std::string(to_string(d.rule));
  j["conclusion"] = to_string(d.conclusion);
  json premises = json::array();
  for (const auto& p : d.premises) premises.push_back(to_json_value(p));
  j["premises"] = std::move(premises);
  json side = json::array();
  for (const auto& s : d.side) {
    side.push_back(std::visit([](const auto& f) { return to_string(f); }, s));
  }
  j["side"] = std::move(side);
  return j;
}

}  // namespace

Derivation parse_derivation_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(std::string("derivation file: ") + e.what());
  }
  return node_from_json(j, "root");
}

std::string to_json(const Derivation& d, int indent) { return to_json_value(d).dump(indent); }

// ---------------------------------------------------------------------------
// Checking

namespace {

void collect_vars(const Derivation& d, NameSet& out) {
  std::visit([&](const auto& f) { collect_prog_vars(f, out); }, d.conclusion.pre);
  std::visit([&](const auto& f) { collect_prog_vars(f, out); }, d.conclusion.post);
  collect_prog_vars(d.conclusion.command, out);
  for (const auto& s : d.side) std::visit([&](const auto& f) { collect_prog_vars(f, out); }, s);
  for (const auto& p : d.premises) collect_vars(p, out);
}

struct Rejected {
  std::string reason;
  std::optional<Verdict> counterexample;
};

class Checker {
 public:
  Checker(const Config& cfg, StateWindow window, DistFamily family)
      : cfg_(cfg), window_(std::move(window)), family_(std::move(family)) {}

  ProofCheck run(const Derivation& root) {
    ProofCheck out;
    flavor_ = root.conclusion.flavor;
    out.scope = flavor_ == Flavor::deterministic ? window_.scope() : family_.scope();
    visit(root, "root", out);
    out.notes = std::move(notes_);
    return out;
  }

 private:
  bool visit(const Derivation& d, const std::string& path, ProofCheck& out) {
    ++out.nodes;
    try {
      if (d.conclusion.flavor != flavor_) throw Rejected{"flavor differs from the root triple", std::nullopt};
      if (flavor_ == Flavor::deterministic) {
        check_det(d);
      } else {
        check_prob(d);
      }
    } catch (const Rejected& r) {
      out.accepted = false;
      out.node = path;
      out.reason = r.reason;
      out.counterexample = r.counterexample;
      return false;
    }
    for (std::size_t i = 0; i < d.premises.size(); ++i) {
      if (!visit(d.premises[i], path + ".premises[" + std::to_string(i) + "]", out)) return false;
    }
    return true;
  }

  [[noreturn]] static void mismatch(const std::string& expected) { throw Rejected{"schema mismatch: expected " + expected, {}}; }

  static void arity(const Derivation& d, std::size_t n) {
    if (d.premises.size() != n) {
      throw Rejected{"schema mismatch: " + std::string(to_string(d.rule)) + " takes " + std::to_string(n) +
                         " premise(s), got " + std::to_string(d.premises.size()),
                     {}};
    }
  }

  template <class T>
  static const T& command_as(const Derivation& d, std::string_view what) {
    const T* c = d.conclusion.command.as<T>();
    if (c == nullptr) mismatch(std::string(what) + " command");
    return *c;
  }

  static void same_command(const Derivation& premise, const Command& c, std::string_view what) {
    if (!(premise.conclusion.command == c)) mismatch("premise command " + std::string(what));
  }

  // ---- PHL_d

  void check_det(const Derivation& d) {
    const auto& t = d.conclusion;
    const Formula& pre = t.det_pre();
    const Formula& post = t.det_post();
    if (d.rule != Rule::cons && !d.side.empty()) mismatch("no side conditions");
    switch (d.rule) {
      case Rule::skip:
        arity(d, 0);
        command_as<Skip>(d, "skip");
        if (!(pre == post) && !(simplify(pre) == simplify(post))) mismatch("{phi} skip {phi}");
        return;
      case Rule::as: {
        arity(d, 0);
        const auto& a = command_as<Assign>(d, "assignment");
        if (pre == subst(post, a.var, a.value)) return;
        if (pre == subst_simplify(post, a.var, a.value)) return;
        if (simplify(pre) == subst_simplify(post, a.var, a.value)) return;
        mismatch("precondition " + to_string(subst(post, a.var, a.value)));
      }
      case Rule::pas: {
        arity(d, 0);
        const auto& a = command_as<PAssign>(d, "probabilistic assignment");
        std::optional<Formula> raw;
        std::vector<Formula> parts;
        for (const auto& e : a.dist.entries()) {
          const Formula inst = subst(post, a.var, Expr::constant(e.value));
          raw = raw ? Formula::conjunction(*raw, inst) : inst;
          parts.push_back(subst_simplify(post, a.var, Expr::constant(e.value)));
        }
        if (pre == *raw || pre == mk_and_all(parts)) return;
        if (simplify(pre) == mk_and_all(parts)) return;
        mismatch("precondition " + to_string(*raw));
      }
      case Rule::seq: {
        arity(d, 2);
        const auto& s = command_as<Seq>(d, "sequential");
        const auto& p0 = d.premises[0].conclusion;
        const auto& p1 = d.premises[1].conclusion;
        same_command(d.premises[0], s.first, "C1");
        same_command(d.premises[1], s.second, "C2");
        if (!(p0.det_pre() == pre)) mismatch("first premise precondition " + to_string(pre));
        if (!(p0.det_post() == p1.det_pre())) mismatch("matching intermediate assertion");
        if (!(p1.det_post() == post)) mismatch("second premise postcondition " + to_string(post));
        return;
      }
      case Rule::if_: {
        arity(d, 2);
        const auto& i = command_as<If>(d, "conditional");
        same_command(d.premises[0], i.then_branch, "C1");
        same_command(d.premises[1], i.else_branch, "C2");
        const Formula want0 = Formula::conjunction(pre, i.guard);
        const Formula want1 = Formula::conjunction(pre, Formula::negation(i.guard));
        if (!(d.premises[0].conclusion.det_pre() == want0)) mismatch("first premise precondition " + to_string(want0));
        if (!(d.premises[1].conclusion.det_pre() == want1)) mismatch("second premise precondition " + to_string(want1));
        if (!(d.premises[0].conclusion.det_post() == post) || !(d.premises[1].conclusion.det_post() == post)) {
          mismatch("premise postconditions " + to_string(post));
        }
        return;
      }
      case Rule::cons: {
        arity(d, 1);
        const auto& p = d.premises[0].conclusion;
        same_command(d.premises[0], t.command, "of the conclusion");
        const Formula left = Formula::implication(pre, p.det_pre());
        const Formula right = Formula::implication(p.det_post(), post);
        listed_sides(d, std::vector<Formula>{left, right});
        discharge(left);
        discharge(right);
        return;
      }
      case Rule::and_:
      case Rule::or_: {
        arity(d, 2);
        same_command(d.premises[0], t.command, "of the conclusion");
        same_command(d.premises[1], t.command, "of the conclusion");
        const auto& p0 = d.premises[0].conclusion;
        const auto& p1 = d.premises[1].conclusion;
        const bool conj = d.rule == Rule::and_;
        const auto join = [&](const Formula& a, const Formula& b) {
          return conj ? Formula::conjunction(a, b) : Formula::disjunction(a, b);
        };
        if (!(pre == join(p0.det_pre(), p1.det_pre()))) {
          mismatch("precondition " + to_string(join(p0.det_pre(), p1.det_pre())));
        }
        if (!(post == join(p0.det_post(), p1.det_post()))) {
          mismatch("postcondition " + to_string(join(p0.det_post(), p1.det_post())));
        }
        return;
      }
      case Rule::while_: {
        arity(d, 1);
        const auto& w = command_as<While>(d, "while");
        const auto& p = d.premises[0].conclusion;
        same_command(d.premises[0], w.body, "equal to the loop body");
        if (!(p.det_pre() == Formula::conjunction(pre, w.guard))) {
          mismatch("premise precondition " + to_string(Formula::conjunction(pre, w.guard)));
        }
        if (!(p.det_post() == pre)) mismatch("premise postcondition " + to_string(pre));
        if (!(post == Formula::conjunction(pre, Formula::negation(w.guard)))) {
          mismatch("postcondition " + to_string(Formula::conjunction(pre, Formula::negation(w.guard))));
        }
        return;
      }
    }
  }

  template <class F>
  static void listed_sides(const Derivation& d, const std::vector<F>& expected) {
    if (d.side.empty()) return;
    bool ok = d.side.size() == expected.size();
    for (std::size_t i = 0; ok && i < expected.size(); ++i) {
      const F* f = std::get_if<F>(&d.side[i]);
      ok = f != nullptr && *f == expected[i];
    }
    if (!ok) {
      std::string want;
      for (const auto& e : expected) want += (want.empty() ? "" : ", ") + to_string(e);
      mismatch("side conditions [" + want + "]");
    }
  }

  void discharge(const Formula& f) {
    const Verdict v = check_valid_det(f, window_, cfg_.quant_window);
    if (!v.ok()) throw Rejected{"side condition fails: " + to_string(f), v};
  }

  void discharge(const ProbFormula& f) {
    const Verdict v = check_valid_prob(f, family_, cfg_);
    if (!v.ok()) throw Rejected{"side condition fails: " + to_string(f), v};
  }

  // ---- probabilistic system

  void check_prob(const Derivation& d) {
    const auto& t = d.conclusion;
    const ProbFormula& pre = t.prob_pre();
    const ProbFormula& post = t.prob_post();
    if (d.rule != Rule::cons && !d.side.empty()) mismatch("no side conditions");
    switch (d.rule) {
      case Rule::skip:
        arity(d, 0);
        command_as<Skip>(d, "skip");
        if (!(pre == post) && !(simplify(pre) == simplify(post))) mismatch("{Phi} skip {Phi}");
        return;
      case Rule::as:
        arity(d, 0);
        command_as<Assign>(d, "assignment");
        return weakest(d);
      case Rule::pas:
        arity(d, 0);
        command_as<PAssign>(d, "probabilistic assignment");
        return weakest(d);
      case Rule::if_:
        arity(d, 0);
        command_as<If>(d, "conditional");
        return weakest(d);
      case Rule::while_:
        arity(d, 0);
        command_as<While>(d, "while");
        return weakest(d);
      case Rule::seq: {
        arity(d, 2);
        const auto& s = command_as<Seq>(d, "sequential");
        const auto& p0 = d.premises[0].conclusion;
        const auto& p1 = d.premises[1].conclusion;
        same_command(d.premises[0], s.first, "C1");
        same_command(d.premises[1], s.second, "C2");
        if (!(p0.prob_pre() == pre)) mismatch("first premise precondition " + to_string(pre));
        if (!(p0.prob_post() == p1.prob_pre())) mismatch("matching intermediate assertion");
        if (!(p1.prob_post() == post)) mismatch("second premise postcondition " + to_string(post));
        return;
      }
      case Rule::cons: {
        arity(d, 1);
        const auto& p = d.premises[0].conclusion;
        same_command(d.premises[0], t.command, "of the conclusion");
        const ProbFormula left = ProbFormula::implication(pre, p.prob_pre());
        const ProbFormula right = ProbFormula::implication(p.prob_post(), post);
        listed_sides(d, std::vector<ProbFormula>{left, right});
        discharge(left);
        discharge(right);
        return;
      }
      case Rule::and_:
      case Rule::or_:
        throw Rejected{std::string(to_string(d.rule)) + " is not a rule of the probabilistic system", {}};
    }
  }

  // {pre} C {post} must be {WP(C, post)} C {post}.
  void weakest(const Derivation& d) {
    const auto& t = d.conclusion;
    const ProbFormula& pre = t.prob_pre();
    const auto w = wpp(t.command, t.prob_post(), PtOptions::from(cfg_));
    const bool syntactic = pre == w.formula || simplify(pre) == w.formula;
    if (w.exact()) {
      if (syntactic) return;
      if (family_equivalent(pre, w.formula)) {
        notes_.push_back(std::string(to_string(d.rule)) + ": precondition matched WP up to family equivalence");
        return;
      }
      mismatch("precondition equivalent to " + to_string(w.formula));
    }
    // The loop expansion is truncated, so compare with the semantics directly.
    switch (semantic_weakest(pre, t.command, t.prob_post())) {
      case Semantic::equal:
        notes_.push_back(std::string(to_string(d.rule)) + ": WP expansion truncated; precondition checked by execution");
        return;
      case Semantic::differs:
        mismatch("precondition equivalent to WP, which is " + to_string(w.formula) + " up to truncation");
      case Semantic::unknown:
        throw Rejected{"cannot establish the WP schema: executions do not finish within the loop bound", {}};
    }
  }

  std::vector<Interpretation> interps_of(const ProbFormula& a, const ProbFormula& b) const {
    NameSet logical = free_log_vars(a);
    logical.merge(free_log_vars(b));
    NameSet reals = real_vars(a);
    reals.merge(real_vars(b));
    return enumerate_interpretations(logical, reals, cfg_.quant_window, cfg_.real_grid);
  }

  bool family_equivalent(const ProbFormula& a, const ProbFormula& b) const {
    const auto interps = interps_of(a, b);
    for (const auto& mu : family_.members()) {
      for (const auto& i : interps) {
        if (sat_prob(a, mu, i, cfg_.quant_window) != sat_prob(b, mu, i, cfg_.quant_window)) return false;
      }
    }
    return true;
  }

  enum class Semantic { equal, differs, unknown };

  Semantic semantic_weakest(const ProbFormula& pre, const Command& c, const ProbFormula& post) const {
    const auto interps = interps_of(pre, post);
    for (const auto& mu : family_.members()) {
      const auto r = exec(c, mu, cfg_.loop_bound);
      if (!r.output_final()) return Semantic::unknown;
      for (const auto& i : interps) {
        if (sat_prob(pre, mu, i, cfg_.quant_window) != sat_prob(post, r.output, i, cfg_.quant_window)) {
          return Semantic::differs;
        }
      }
    }
    return Semantic::equal;
  }

  Config cfg_;
  StateWindow window_;
  DistFamily family_;
  Flavor flavor_ = Flavor::deterministic;
  std::vector<std::string> notes_;
};

}  // namespace

ProofCheck check_derivation(const Derivation& d, const Config& cfg, const std::vector<SubDistribution>& user) {
  NameSet vars;
  collect_vars(d, vars);
  StateWindow window(std::vector<std::string>(vars.begin(), vars.end()), cfg.int_window);
  DistFamily family(window, cfg.seed, user);
  return Checker(cfg, std::move(window), std::move(family)).run(d);
}

// ---------------------------------------------------------------------------
// Canonical derivations

namespace {

Derivation node(Rule rule, Flavor flavor, std::variant<Formula, ProbFormula> pre, Command c,
                std::variant<Formula, ProbFormula> post, std::vector<Derivation> premises = {}) {
  Derivation d;
  d.rule = rule;
  d.conclusion = SourceTriple{flavor, std::move(pre), std::move(c), std::move(post)};
  d.premises = std::move(premises);
  return d;
}

Derivation cons_det(const Formula& pre, const Formula& post, Derivation inner) {
  const Formula ipre = inner.conclusion.det_pre();
  const Formula ipost = inner.conclusion.det_post();
  Derivation d = node(Rule::cons, Flavor::deterministic, pre, inner.conclusion.command, post);
  d.side = {Formula::implication(pre, ipre), Formula::implication(ipost, post)};
  d.premises.push_back(std::move(inner));
  return d;
}

class DetCanon {
 public:
  explicit DetCanon(const Config& cfg) : opts_(WpOptions::from(cfg)) {}

  // A derivation of {wp(C, psi)} C {psi}.
  Derivation build(const Command& c, const Formula& psi) {
    constexpr auto det = Flavor::deterministic;
    return std::visit(
        overloaded{
            [&](const Skip&) { return node(Rule::skip, det, psi, c, psi); },
            [&](const Assign& a) { return node(Rule::as, det, subst_simplify(psi, a.var, a.value), c, psi); },
            [&](const PAssign&) { return node(Rule::pas, det, wp(c, psi, opts_).formula, c, psi); },
            [&](const Seq& s) {
              Derivation second = build(s.second, psi);
              Derivation first = build(s.first, second.conclusion.det_pre());
              const Formula pre = first.conclusion.det_pre();
              std::vector<Derivation> premises;
              premises.push_back(std::move(first));
              premises.push_back(std::move(second));
              return node(Rule::seq, det, pre, c, psi, std::move(premises));
            },
            [&](const If& i) {
              Derivation d1 = build(i.then_branch, psi);
              Derivation d2 = build(i.else_branch, psi);
              const Formula phi = mk_or(mk_and(i.guard, d1.conclusion.det_pre()),
                                        mk_and(mk_not(i.guard), d2.conclusion.det_pre()));
              std::vector<Derivation> premises;
              premises.push_back(cons_det(Formula::conjunction(phi, i.guard), psi, std::move(d1)));
              premises.push_back(cons_det(Formula::conjunction(phi, Formula::negation(i.guard)), psi, std::move(d2)));
              return node(Rule::if_, det, phi, c, psi, std::move(premises));
            },
            [&](const While& w) {
              const Formula inv = wp(c, psi, opts_).formula;
              Derivation body = build(w.body, inv);
              std::vector<Derivation> premises;
              premises.push_back(cons_det(Formula::conjunction(inv, w.guard), inv, std::move(body)));
              Derivation loop = node(Rule::while_, det, inv, c, Formula::conjunction(inv, Formula::negation(w.guard)),
                                     std::move(premises));
              return cons_det(inv, psi, std::move(loop));
            },
        },
        c.node());
  }

 private:
  WpOptions opts_;
};

class ProbCanon {
 public:
  explicit ProbCanon(const Config& cfg) : opts_(PtOptions::from(cfg)) {}

  Derivation build(const Command& c, const ProbFormula& post) {
    constexpr auto prob = Flavor::probabilistic;
    if (c.is<Skip>()) return node(Rule::skip, prob, post, c, post);
    if (const auto* s = c.as<Seq>()) {
      Derivation second = build(s->second, post);
      Derivation first = build(s->first, second.conclusion.prob_pre());
      const ProbFormula pre = first.conclusion.prob_pre();
      std::vector<Derivation> premises;
      premises.push_back(std::move(first));
      premises.push_back(std::move(second));
      return node(Rule::seq, prob, pre, c, post, std::move(premises));
    }
    Rule rule = Rule::as;
    if (c.is<PAssign>()) rule = Rule::pas;
    if (c.is<If>()) rule = Rule::if_;
    if (c.is<While>()) rule = Rule::while_;
    return node(rule, prob, wpp(c, post, opts_).formula, c, post);
  }

 private:
  PtOptions opts_;
};

}  // namespace

Derivation canonical_derivation(const SourceTriple& t, const Config& cfg) {
  if (t.flavor == Flavor::deterministic) {
    return cons_det(t.det_pre(), t.det_post(), DetCanon(cfg).build(t.command, t.det_post()));
  }
  Derivation inner = ProbCanon(cfg).build(t.command, t.prob_post());
  const ProbFormula ipre = inner.conclusion.prob_pre();
  Derivation d = node(Rule::cons, Flavor::probabilistic, t.prob_pre(), t.command, t.prob_post());
  d.side = {ProbFormula::implication(t.prob_pre(), ipre), ProbFormula::implication(t.prob_post(), t.prob_post())};
  d.premises.push_back(std::move(inner));
  return d;
}

// ---------------------------------------------------------------------------
// Rule soundness

int SoundnessReport::total() const {
  int n = 0;
  for (const int k : instances) n += k;
  return n;
}

namespace {

class SoundnessRun {
 public:
  SoundnessRun(std::uint64_t seed, const Config& cfg)
      : cfg_(cfg), gen_(seed, options(cfg)), window_(gen_.options().vars, cfg.int_window) {
    wopts_ = WpOptions::from(cfg);
  }

  static GenOptions options(const Config& cfg) {
    GenOptions o;
    o.window = cfg.int_window;
    return o;
  }

  SoundnessReport run(int per_rule) {
    for (int r = 0; r < 9; ++r) {
      const Rule rule = static_cast<Rule>(r);
      int found = 0;
      for (int attempt = 0; found < per_rule && attempt < per_rule * 50; ++attempt) {
        if (instance(rule)) ++found;
      }
    }
    return std::move(report_);
  }

 private:
  bool holds(const Formula& pre, const Command& c, const Formula& post) {
    return check_triple_det(pre, c, post, window_, cfg_.quant_window, cfg_.loop_bound).ok();
  }

  bool valid(const Formula& f) { return check_valid_det(f, window_, cfg_.quant_window).ok(); }

  Formula wp_of(const Command& c, const Formula& psi) { return wp(c, psi, wopts_).formula; }

  // Returns false when the drawn premises are not valid and nothing was tested.
  bool instance(Rule rule) {
    Formula pre = Formula::truth();
    Formula post = Formula::truth();
    Command c = Command::skip();
    switch (rule) {
      case Rule::skip:
        pre = post = gen_.formula(2);
        break;
      case Rule::as: {
        post = gen_.formula(2);
        const auto& v = gen_.options().vars[gen_.pick(gen_.options().vars.size())];
        const Expr e = gen_.expr(2);
        c = Command::assign(v, e);
        pre = subst(post, v, e);
        break;
      }
      case Rule::pas: {
        post = gen_.formula(2);
        const auto& v = gen_.options().vars[gen_.pick(gen_.options().vars.size())];
        const DistSpec dist = gen_.dist_spec(1 + gen_.pick(3));
        c = Command::passign(v, dist);
        std::optional<Formula> raw;
        for (const auto& e : dist.entries()) {
          const Formula inst = subst(post, v, Expr::constant(e.value));
          raw = raw ? Formula::conjunction(*raw, inst) : inst;
        }
        pre = *raw;
        break;
      }
      case Rule::seq: {
        const Command c1 = gen_.loop_free(2);
        const Command c2 = gen_.loop_free(2);
        post = gen_.formula(2);
        const Formula mid = gen_.chance(50) ? wp_of(c2, post) : mk_and(wp_of(c2, post), gen_.formula(1));
        pre = wp_of(c1, mid);
        if (!holds(pre, c1, mid) || !holds(mid, c2, post)) return false;
        c = Command::seq(c1, c2);
        break;
      }
      case Rule::if_: {
        const Formula b = gen_.guard(1);
        const Command c1 = gen_.loop_free(2);
        const Command c2 = gen_.loop_free(2);
        post = gen_.formula(2);
        pre = mk_and(gen_.chance(50) ? gen_.formula(1) : Formula::truth(),
                     mk_and(mk_implies(b, wp_of(c1, post)), mk_implies(mk_not(b), wp_of(c2, post))));
        if (!holds(Formula::conjunction(pre, b), c1, post) ||
            !holds(Formula::conjunction(pre, Formula::negation(b)), c2, post)) {
          return false;
        }
        c = Command::if_then_else(b, c1, c2);
        break;
      }
      case Rule::cons: {
        c = gen_.loop_free(2);
        const Formula psi = gen_.formula(2);
        const Formula phi = wp_of(c, psi);
        pre = Formula::conjunction(phi, gen_.formula(1));
        post = Formula::disjunction(psi, gen_.formula(1));
        if (!holds(phi, c, psi) || !valid(Formula::implication(pre, phi)) || !valid(Formula::implication(psi, post))) {
          return false;
        }
        break;
      }
      case Rule::and_:
      case Rule::or_: {
        c = gen_.loop_free(2);
        const Formula psi1 = gen_.formula(2);
        const Formula psi2 = gen_.formula(2);
        const Formula phi1 = mk_and(wp_of(c, psi1), gen_.chance(30) ? gen_.guard(1) : Formula::truth());
        const Formula phi2 = mk_and(wp_of(c, psi2), gen_.chance(30) ? gen_.guard(1) : Formula::truth());
        if (!holds(phi1, c, psi1) || !holds(phi2, c, psi2)) return false;
        if (rule == Rule::and_) {
          pre = Formula::conjunction(phi1, phi2);
          post = Formula::conjunction(psi1, psi2);
        } else {
          pre = Formula::disjunction(phi1, phi2);
          post = Formula::disjunction(psi1, psi2);
        }
        break;
      }
      case Rule::while_: {
        c = gen_.while_loop(2);
        const auto& w = *c.as<While>();
        // Either a random candidate or the computed wp of a random
        // postcondition, which is an invariant when the unrolling converged.
        const Formula inv = gen_.chance(50) ? gen_.formula(2) : wp_of(c, gen_.formula(1));
        if (!holds(Formula::conjunction(inv, w.guard), w.body, inv)) return false;
        pre = inv;
        post = Formula::conjunction(inv, Formula::negation(w.guard));
        break;
      }
    }
    ++report_.instances[static_cast<std::size_t>(rule)];
    const Verdict v = check_triple_det(pre, c, post, window_, cfg_.quant_window, cfg_.loop_bound);
    if (!v.ok()) {
      report_.failures.push_back({rule, "{" + to_string(pre) + "} " + to_string(c) + " {" + to_string(post) + "}",
                                  v.summary()});
    }
    return true;
  }

  Config cfg_;
  Generator gen_;
  StateWindow window_;
  WpOptions wopts_;
  SoundnessReport report_;
};

}  // namespace

SoundnessReport rule_soundness_suite(std::uint64_t seed, int per_rule, const Config& cfg) {
  return SoundnessRun(seed, cfg).run(per_rule);
}

}  // namespace phl
