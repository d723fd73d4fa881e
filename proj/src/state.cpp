#include "phl/state.hpp"

namespace phl {

std::string IntRange::to_string() const { return "[" + std::to_string(lo) + "," + std::to_string(hi) + "]"; }

const Integer* State::find(std::string_view var) const {
  const auto it = values_.find(var);
  return it == values_.end() ? nullptr : &it->second;
}

const Integer& State::at(std::string_view var) const {
  if (const auto* v = find(var)) return *v;
  throw UnboundVariable(std::string(var));
}

State State::with(std::string_view var, Integer value) const {
  Map copy = values_;
  copy.insert_or_assign(std::string(var), std::move(value));
  return State(std::move(copy));
}

State State::without(std::string_view var) const {
  Map copy = values_;
  if (const auto it = copy.find(var); it != copy.end()) copy.erase(it);
  return State(std::move(copy));
}

std::string State::to_string() const {
  std::string out = "{";
  bool first = true;
  for (const auto& [k, v] : values_) {
    if (!first) out += ", ";
    first = false;
    out += k + "=" + v.to_string();
  }
  return out + "}";
}

SubDistribution::SubDistribution(const std::vector<std::pair<State, Rational>>& entries) {
  for (const auto& [s, p] : entries) {
    if (p.sign() < 0 || p > Rational(1)) {
      throw std::invalid_argument("probability " + p.to_string() + " of " + s.to_string() + " outside [0,1]");
    }
    add(s, p);
  }
  if (total_mass() > Rational(1)) {
    throw std::invalid_argument("total mass " + total_mass().to_string() + " exceeds 1");
  }
}

SubDistribution SubDistribution::point(const State& s) {
  SubDistribution d;
  d.entries_.emplace(s, Rational(1));
  return d;
}

Rational SubDistribution::operator()(const State& s) const {
  const auto it = entries_.find(s);
  return it == entries_.end() ? Rational() : it->second;
}

std::vector<State> SubDistribution::support() const {
  std::vector<State> out;
  out.reserve(entries_.size());
  for (const auto& [s, p] : entries_) out.push_back(s);
  return out;
}

Rational SubDistribution::total_mass() const {
  Rational total;
  for (const auto& [s, p] : entries_) total += p;
  return total;
}

void SubDistribution::add(const State& s, const Rational& p) {
  if (p.is_zero()) return;
  auto [it, inserted] = entries_.try_emplace(s, p);
  if (!inserted) {
    it->second += p;
    if (it->second.is_zero()) entries_.erase(it);
  }
}

void SubDistribution::add(const SubDistribution& other) {
  for (const auto& [s, p] : other.entries_) add(s, p);
}

void SubDistribution::add_scaled(const SubDistribution& other, const Rational& factor) {
  if (factor.is_zero()) return;
  for (const auto& [s, p] : other.entries_) add(s, p * factor);
}

SubDistribution SubDistribution::scaled(const Rational& factor) const {
  SubDistribution out;
  out.add_scaled(*this, factor);
  return out;
}

SubDistribution SubDistribution::without(std::string_view var) const {
  SubDistribution out;
  for (const auto& [s, p] : entries_) out.add(s.without(var), p);
  return out;
}

void SubDistribution::validate() const {
  for (const auto& [s, p] : entries_) {
    if (p.sign() <= 0 || p > Rational(1)) throw std::logic_error("stored probability out of (0,1]: " + p.to_string());
  }
  if (total_mass() > Rational(1)) throw std::logic_error("total mass exceeds 1: " + total_mass().to_string());
}

std::string Interpretation::to_string() const {
  std::string out = "{";
  bool first = true;
  for (const auto& [k, v] : logical) {
    if (!first) out += ", ";
    first = false;
    out += k + "=" + v.to_string();
  }
  for (const auto& [k, v] : real) {
    if (!first) out += ", ";
    first = false;
    out += "@" + k + "=" + v.to_string();
  }
  return out + "}";
}

}  // namespace phl
