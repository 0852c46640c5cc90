#include "desa/attack.hpp"

#include <deque>

namespace desa {

namespace {

StateId namespaced(const std::set<StateId>& taken, const StateId& state, const std::string& scope) {
  StateId base = state + "~" + scope;
  while (taken.count(base)) base += "'";
  return base;
}

bool marked_language_nonempty(const Automaton& f) {
  std::set<StateId> seen{f.initial};
  std::deque<StateId> work{f.initial};
  while (!work.empty()) {
    StateId q = work.front();
    work.pop_front();
    if (f.marked.count(q)) return true;
    auto it = f.transitions.find(q);
    if (it == f.transitions.end()) continue;
    for (const auto& [label, dsts] : it->second) {
      for (const auto& dst : dsts) {
        if (seen.insert(dst).second) work.push_back(dst);
      }
    }
  }
  return false;
}

}  // namespace

std::string to_string(const TransitionKey& tr) {
  return "(" + tr.src + "," + tr.event + "," + tr.dst + ")";
}

const Automaton* AttackSpec::language_for(const TransitionKey& tr) const {
  auto it = entries.find(tr);
  return it == entries.end() ? nullptr : &it->second;
}

void AttackSpec::validate(const Automaton& plant) const {
  plant.require_deterministic("attacked plant '" + plant.name + "'");
  for (const auto& [tr, f] : entries) {
    if (!plant.has_transition(tr.src, tr.event, tr.dst)) {
      throw Error("attacked transition " + to_string(tr) + " is not a transition of '" +
                  plant.name + "'");
    }
    if (!plant.alphabet.sensor_attackable.count(tr.event)) {
      throw Error("attacked event '" + tr.event + "' is not sensor-attackable in '" + plant.name +
                  "'");
    }
    f.validate();
    f.require_deterministic("attack automaton '" + f.name + "'");
    for (const auto& e : f.alphabet.events) {
      if (!plant.alphabet.contains(e)) {
        throw Error("attack automaton '" + f.name + "' uses event '" + e +
                    "' outside the plant alphabet");
      }
    }
    if (f.marked.empty() || !marked_language_nonempty(f)) {
      throw Error("attack automaton '" + f.name + "' marks the empty language");
    }
  }
}

AttackSpec AttackSpec::restricted_to(const Automaton& sub) const {
  AttackSpec out;
  out.plant_name = sub.name;
  for (const auto& [tr, f] : entries) {
    if (sub.has_transition(tr.src, tr.event, tr.dst)) out.entries.emplace(tr, f);
  }
  return out;
}

bool PatternBounds::contains(const std::set<EventId>& pattern) const {
  for (const auto& e : lower) {
    if (!pattern.count(e)) return false;
  }
  for (const auto& e : pattern) {
    if (!upper.count(e)) return false;
  }
  return true;
}

Automaton build_attacked_automaton(const Automaton& g, const AttackSpec& atk) {
  g.validate();
  atk.validate(g);

  Automaton out = g;
  out.marked = g.states;  // original states carry the marking
  out.inserted.clear();
  for (const auto& [tr, f] : atk.entries) {
    auto& dsts = out.transitions[tr.src][tr.event];
    dsts.erase(tr.dst);
    if (dsts.empty()) out.transitions[tr.src].erase(tr.event);

    const std::string scope = tr.src + "." + tr.event + "." + tr.dst;
    std::map<StateId, StateId> rename;
    for (const auto& q : f.states) {
      StateId fresh = namespaced(out.states, q, scope);
      rename[q] = fresh;
      out.states.insert(fresh);
      out.inserted.insert(fresh);
    }
    for (const auto& [src, by_label] : f.transitions) {
      for (const auto& [label, targets] : by_label) {
        for (const auto& dst : targets) out.add_transition(rename.at(src), label, rename.at(dst));
      }
    }
    out.add_transition(tr.src, kEpsilon, rename.at(f.initial));
    for (const auto& m : f.marked) out.add_transition(rename.at(m), kEpsilon, tr.dst);
  }
  return out;
}

Automaton erase_unobservable(const Automaton& ga, const std::set<EventId>& observable) {
  Automaton out = ga;
  out.alphabet = ga.alphabet.restricted_to(observable);
  out.transitions.clear();
  for (const auto& [src, by_label] : ga.transitions) {
    for (const auto& [label, dsts] : by_label) {
      EventId out_label = (label != kEpsilon && observable.count(label)) ? label : kEpsilon;
      for (const auto& dst : dsts) out.add_transition(src, out_label, dst);
    }
  }
  return out;
}

Automaton theta_automaton(const Automaton& g, const AttackSpec& atk, const StringSeq& s) {
  g.require_deterministic("plant '" + g.name + "'");
  atk.validate(g);

  Automaton out;
  out.name = "theta";
  out.alphabet = g.alphabet;
  out.initial = "c0";
  out.states.insert(out.initial);

  StateId plant_state = g.initial;
  StateId chain = out.initial;
  for (std::size_t k = 0; k < s.size(); ++k) {
    auto next = g.step(plant_state, s[k]);
    if (!next) {
      throw Error("string '" + format_seq(s) + "' leaves L(" + g.name + ") at position " +
                  std::to_string(k + 1) + " (event '" + s[k] + "')");
    }
    StateId link = "c" + std::to_string(k + 1);
    out.states.insert(link);

    TransitionKey tr{plant_state, s[k], *next};
    const Automaton* f = atk.language_for(tr);
    if (!f) {
      out.add_transition(chain, s[k], link);
    } else {
      const std::string scope = "p" + std::to_string(k + 1);
      std::map<StateId, StateId> rename;
      for (const auto& q : f->states) {
        StateId fresh = namespaced(out.states, q, scope);
        rename[q] = fresh;
        out.states.insert(fresh);
      }
      for (const auto& [src, by_label] : f->transitions) {
        for (const auto& [label, targets] : by_label) {
          for (const auto& dst : targets) out.add_transition(rename.at(src), label, rename.at(dst));
        }
      }
      out.add_transition(chain, kEpsilon, rename.at(f->initial));
      for (const auto& m : f->marked) out.add_transition(rename.at(m), kEpsilon, link);
    }
    plant_state = *next;
    chain = link;
  }
  out.marked = {chain};
  return out;
}

Automaton phi_automaton(const Automaton& g, const AttackSpec& atk, const StringSeq& s) {
  Automaton theta = theta_automaton(g, atk, s);
  Automaton phi = project(theta, g.alphabet.observable);
  phi.name = "phi";
  return phi;
}

PatternBounds actuator_pattern_bounds(const std::set<EventId>& gamma, const Alphabet& alphabet) {
  for (const auto& e : gamma) {
    if (!alphabet.contains(e)) {
      throw Error("control pattern event '" + e + "' is not in the alphabet");
    }
  }
  return PatternBounds{set_minus(gamma, alphabet.actuator_attackable),
                       set_union(gamma, alphabet.actuator_attackable)};
}

}  // namespace desa
