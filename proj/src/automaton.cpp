#include "desa/automaton.hpp"

#include <deque>

namespace desa {

void Automaton::add_state(const StateId& q, bool mark) {
  states.insert(q);
  if (mark) marked.insert(q);
}

void Automaton::add_transition(const StateId& src, const EventId& label, const StateId& dst) {
  transitions[src][label].insert(dst);
}

bool Automaton::has_transition(const StateId& src, const EventId& label, const StateId& dst) const {
  const auto* succ = successors(src, label);
  return succ && succ->count(dst) > 0;
}

const std::set<StateId>* Automaton::successors(const StateId& src, const EventId& label) const {
  auto it = transitions.find(src);
  if (it == transitions.end()) return nullptr;
  auto jt = it->second.find(label);
  if (jt == it->second.end()) return nullptr;
  return &jt->second;
}

std::optional<StateId> Automaton::step(const StateId& src, const EventId& event) const {
  const auto* succ = successors(src, event);
  if (!succ || succ->empty()) return std::nullopt;
  return *succ->begin();
}

std::optional<StateId> Automaton::run(const StringSeq& s) const {
  StateId cur = initial;
  for (const auto& e : s) {
    auto next = step(cur, e);
    if (!next) return std::nullopt;
    cur = *next;
  }
  return cur;
}

bool Automaton::is_deterministic() const {
  for (const auto& [src, by_label] : transitions) {
    for (const auto& [label, dsts] : by_label) {
      if (label == kEpsilon) return false;
      if (dsts.size() > 1) return false;
    }
  }
  return true;
}

bool Automaton::has_epsilon() const {
  for (const auto& [src, by_label] : transitions) {
    if (by_label.count(kEpsilon)) return true;
  }
  return false;
}

std::size_t Automaton::transition_count() const {
  std::size_t n = 0;
  for (const auto& [src, by_label] : transitions) {
    for (const auto& [label, dsts] : by_label) n += dsts.size();
  }
  return n;
}

std::set<StateId> Automaton::epsilon_closure(const std::set<StateId>& from) const {
  std::set<StateId> out = from;
  std::deque<StateId> work(from.begin(), from.end());
  while (!work.empty()) {
    StateId q = work.front();
    work.pop_front();
    const auto* succ = successors(q, kEpsilon);
    if (!succ) continue;
    for (const auto& q2 : *succ) {
      if (out.insert(q2).second) work.push_back(q2);
    }
  }
  return out;
}

std::set<StateId> Automaton::step_set(const std::set<StateId>& from, const EventId& event) const {
  std::set<StateId> out;
  for (const auto& q : from) {
    const auto* succ = successors(q, event);
    if (succ) out.insert(succ->begin(), succ->end());
  }
  return out;
}

void Automaton::validate() const {
  validate_name("automaton", name);
  alphabet.validate();
  for (const auto& q : states) validate_name("state", q);
  if (initial.empty()) throw Error("automaton '" + name + "' has no initial state");
  if (!states.count(initial)) throw Error("initial state '" + initial + "' is not a state of '" + name + "'");
  for (const auto& q : marked) {
    if (!states.count(q)) throw Error("marked state '" + q + "' is not a state of '" + name + "'");
  }
  for (const auto& q : inserted) {
    if (!states.count(q)) throw Error("inserted state '" + q + "' is not a state of '" + name + "'");
  }
  for (const auto& [src, by_label] : transitions) {
    if (!states.count(src)) throw Error("transition source '" + src + "' is not a state of '" + name + "'");
    for (const auto& [label, dsts] : by_label) {
      if (label != kEpsilon && !alphabet.contains(label)) {
        throw Error("transition label '" + label + "' is not in the alphabet of '" + name + "'");
      }
      for (const auto& dst : dsts) {
        if (!states.count(dst)) throw Error("transition target '" + dst + "' is not a state of '" + name + "'");
      }
    }
  }
}

void Automaton::require_deterministic(const std::string& role) const {
  if (!is_deterministic()) throw Error(role + " must be deterministic and free of silent moves");
}

Automaton make_automaton(std::string name, Alphabet alphabet, StateId initial,
                         const std::vector<std::tuple<StateId, EventId, StateId>>& transitions,
                         std::optional<std::set<StateId>> marked) {
  Automaton a;
  a.name = std::move(name);
  a.alphabet = std::move(alphabet);
  a.initial = std::move(initial);
  a.states.insert(a.initial);
  for (const auto& [src, label, dst] : transitions) {
    a.states.insert(src);
    a.states.insert(dst);
    a.add_transition(src, label, dst);
  }
  a.marked = marked ? std::move(*marked) : a.states;
  a.validate();
  return a;
}

bool is_subautomaton(const Automaton& sub, const Automaton& g) {
  if (sub.initial != g.initial) return false;
  for (const auto& q : sub.states) {
    if (!g.states.count(q)) return false;
  }
  for (const auto& [src, by_label] : sub.transitions) {
    for (const auto& [label, dsts] : by_label) {
      for (const auto& dst : dsts) {
        if (!g.has_transition(src, label, dst)) return false;
      }
    }
  }
  return true;
}

}  // namespace desa
