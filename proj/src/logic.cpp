#include "phl/logic.hpp"

#include <algorithm>
#include <random>

#include <json.hpp>

#include "phl/interp.hpp"

namespace phl {

Rational eval_real(const RealExpr& r, const SubDistribution& mu, const Interpretation& interp, IntRange qwindow) {
  return std::visit(overloaded{
                        [](const RatConst& c) { return c.value; },
                        [&](const RealVar& v) {
                          const auto it = interp.real.find(v.name);
                          if (it == interp.real.end()) throw UnboundVariable("@" + v.name);
                          return it->second;
                        },
                        [&](const Prob& p) {
                          Rational sum;
                          for (const auto& [s, w] : mu.entries()) {
                            if (sat_det(p.phi, s, interp, qwindow)) sum += w;
                          }
                          return sum;
                        },
                        [&](const RealBin& b) {
                          return apply(b.op, eval_real(b.lhs, mu, interp, qwindow),
                                       eval_real(b.rhs, mu, interp, qwindow));
                        },
                    },
                    r.node());
}

bool sat_prob(const ProbFormula& f, const SubDistribution& mu, const Interpretation& interp, IntRange qwindow) {
  return std::visit(overloaded{
                        [](const PConst& c) { return c.value; },
                        [&](const PRel& r) {
                          return apply(r.op, eval_real(r.lhs, mu, interp, qwindow),
                                       eval_real(r.rhs, mu, interp, qwindow));
                        },
                        [&](const PNot& n) { return !sat_prob(n.arg, mu, interp, qwindow); },
                        [&](const PAnd& b) {
                          return sat_prob(b.lhs, mu, interp, qwindow) && sat_prob(b.rhs, mu, interp, qwindow);
                        },
                        [&](const POr& b) {
                          return sat_prob(b.lhs, mu, interp, qwindow) || sat_prob(b.rhs, mu, interp, qwindow);
                        },
                        [&](const PImplies& b) {
                          return !sat_prob(b.lhs, mu, interp, qwindow) || sat_prob(b.rhs, mu, interp, qwindow);
                        },
                    },
                    f.node());
}

// --- windows and families ---------------------------------------------------

StateWindow::StateWindow(std::vector<std::string> vars, IntRange range) : vars_(std::move(vars)), range_(range) {
  std::sort(vars_.begin(), vars_.end());
  vars_.erase(std::unique(vars_.begin(), vars_.end()), vars_.end());
  if (range_.empty()) return;
  std::vector<long> digits(vars_.size(), range_.lo);
  while (true) {
    State::Map m;
    for (std::size_t i = 0; i < vars_.size(); ++i) m.emplace(vars_[i], Integer(digits[i]));
    states_.emplace_back(std::move(m));
    std::size_t k = vars_.size();
    while (k > 0 && digits[k - 1] == range_.hi) digits[--k] = range_.lo;
    if (k == 0) break;
    ++digits[k - 1];
  }
}

bool StateWindow::contains(const State& s) const {
  if (s.size() != vars_.size()) return false;
  for (const auto& v : vars_) {
    const auto* x = s.find(v);
    if (!x || !range_.contains(*x)) return false;
  }
  return true;
}

std::string StateWindow::scope() const {
  std::string names;
  for (const auto& v : vars_) names += (names.empty() ? "" : ",") + v;
  return "on window " + range_.to_string() + "^{" + names + "}";
}

DistFamily::DistFamily(const StateWindow& window, std::uint64_t seed, std::vector<SubDistribution> user,
                       int mixtures)
    : seed_(seed) {
  const auto& states = window.states();
  for (const auto& s : states) members_.push_back(SubDistribution::point(s));
  for (auto& u : user) members_.push_back(std::move(u));
  if (!states.empty()) {
    std::mt19937_64 rng(seed);
    for (int m = 0; m < mixtures; ++m) {
      const std::size_t k = std::min<std::size_t>(1 + rng() % 4, states.size());
      std::vector<std::size_t> picks;
      while (picks.size() < k) {
        const std::size_t idx = rng() % states.size();
        if (std::find(picks.begin(), picks.end(), idx) == picks.end()) picks.push_back(idx);
      }
      std::vector<long> weights;
      long total = 0;
      for (std::size_t i = 0; i < k; ++i) {
        weights.push_back(1 + static_cast<long>(rng() % 6));
        total += weights.back();
      }
      // Every fourth mixture loses some mass.
      const Rational mass = m % 4 == 3 ? Rational(1 + static_cast<long>(rng() % 3), 4) : Rational(1);
      SubDistribution d;
      for (std::size_t i = 0; i < k; ++i) d.add(states[picks[i]], mass * Rational(weights[i], total));
      members_.push_back(std::move(d));
    }
    members_.push_back(SubDistribution::zero());
    SubDistribution half;
    half.add(states.front(), Rational(1, 4));
    half.add(states.back(), Rational(1, 4));
    members_.push_back(std::move(half));
  } else {
    members_.push_back(SubDistribution::zero());
  }
}

std::string DistFamily::scope() const {
  return "on family seed=" + std::to_string(seed_) + ", size=" + std::to_string(members_.size());
}

std::vector<Interpretation> enumerate_interpretations(const NameSet& logical, const NameSet& real, IntRange qwindow,
                                                      const std::vector<Rational>& grid) {
  std::vector<Interpretation> out{Interpretation{}};
  for (const auto& x : logical) {
    std::vector<Interpretation> next;
    for (const auto& base : out) {
      for (long n = qwindow.lo; n <= qwindow.hi; ++n) {
        Interpretation i = base;
        i.logical.emplace(x, Integer(n));
        next.push_back(std::move(i));
      }
    }
    out = std::move(next);
  }
  for (const auto& x : real) {
    std::vector<Interpretation> next;
    for (const auto& base : out) {
      for (const auto& v : grid) {
        Interpretation i = base;
        i.real.emplace(x, v);
        next.push_back(std::move(i));
      }
    }
    out = std::move(next);
  }
  return out;
}

// --- verdicts ---------------------------------------------------------------

std::string_view to_string(Verdict::Kind k) {
  switch (k) {
    case Verdict::Kind::holds: return "holds";
    case Verdict::Kind::holds_up_to_residual: return "holds_up_to_residual";
    case Verdict::Kind::counterexample: return "counterexample";
  }
  return "?";
}

namespace {

std::string dist_to_string(const SubDistribution& mu) {
  if (mu.empty()) return "0";
  std::string out;
  for (const auto& [s, p] : mu.entries()) {
    out += (out.empty() ? "" : " + ") + p.to_string() + "*" + s.to_string();
  }
  return out;
}

}  // namespace

std::string Verdict::summary() const {
  std::string out;
  switch (kind) {
    case Kind::holds: out = "holds " + scope; break;
    case Kind::holds_up_to_residual: out = "holds up to residual mass " + residual.to_string() + " " + scope; break;
    case Kind::counterexample: out = "counterexample " + scope; break;
  }
  if (state) out += ": state " + state->to_string();
  if (dist) out += ": distribution " + dist_to_string(*dist);
  if (interp && (!interp->logical.empty() || !interp->real.empty())) out += " with " + interp->to_string();
  if (!detail.empty()) out += " (" + detail + ")";
  return out;
}

Verdict check_valid_det(const Formula& phi, const StateWindow& window, IntRange qwindow) {
  Verdict v;
  v.scope = window.scope();
  const auto interps = enumerate_interpretations(free_log_vars(phi), {}, qwindow, {});
  for (const auto& s : window.states()) {
    for (const auto& i : interps) {
      if (!sat_det(phi, s, i, qwindow)) {
        v.kind = Verdict::Kind::counterexample;
        v.state = s;
        v.interp = i;
        return v;
      }
    }
  }
  return v;
}

Verdict check_valid_prob(const ProbFormula& f, const DistFamily& family, const Config& cfg) {
  Verdict v;
  v.scope = family.scope();
  const auto interps = enumerate_interpretations(free_log_vars(f), real_vars(f), cfg.quant_window, cfg.real_grid);
  for (const auto& mu : family.members()) {
    for (const auto& i : interps) {
      if (!sat_prob(f, mu, i, cfg.quant_window)) {
        v.kind = Verdict::Kind::counterexample;
        v.dist = mu;
        v.interp = i;
        return v;
      }
    }
  }
  return v;
}

// --- distribution files -----------------------------------------------------

namespace {

Integer json_integer(const nlohmann::json& j) {
  if (j.is_number_integer()) return Integer(j.get<long>());
  if (j.is_string()) return Integer::parse(j.get<std::string>());
  throw Error("state value must be an integer");
}

SubDistribution json_distribution(const nlohmann::json& list) {
  std::vector<std::pair<State, Rational>> entries;
  for (const auto& e : list) {
    if (!e.is_object() || !e.contains("state") || !e.contains("prob")) {
      throw Error("distribution entry needs \"state\" and \"prob\"");
    }
    State::Map m;
    for (const auto& [k, val] : e.at("state").items()) {
      if (k.empty() || !(std::isupper(static_cast<unsigned char>(k[0])) || k[0] == '_')) {
        throw Error("'" + k + "' is not a program variable");
      }
      m.emplace(k, json_integer(val));
    }
    const auto& p = e.at("prob");
    const Rational prob = p.is_string() ? Rational::parse(p.get<std::string>())
                          : p.is_number_integer() ? Rational(p.get<long>())
                                                  : throw Error("prob must be an exact fraction string \"n/d\"");
    entries.emplace_back(State(std::move(m)), prob);
  }
  try {
    return SubDistribution(entries);
  } catch (const std::invalid_argument& e) {
    throw Error(std::string("distribution rejected: ") + e.what());
  }
}

}  // namespace

std::vector<SubDistribution> parse_distributions_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(std::string("distribution file: ") + e.what());
  }
  if (!j.is_array()) throw Error("distribution file must hold a JSON list");
  try {
    if (!j.empty() && j.front().is_array()) {
      std::vector<SubDistribution> out;
      for (const auto& d : j) out.push_back(json_distribution(d));
      return out;
    }
    return {json_distribution(j)};
  } catch (const std::invalid_argument& e) {
    throw Error(std::string("distribution file: ") + e.what());
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("distribution file: ") + e.what());
  }
}

}  // namespace phl
