#include "desa/estimation.hpp"

#include <cassert>
#include <deque>

namespace desa {

namespace {

/// Observer states reachable from x by reading a complete string of the
/// projected attack language; nullopt entries become the off-domain flag.
struct ReachResult {
  std::set<StateId> states;
  bool off_domain = false;
};

ReachResult reach_through_attack(const ObserverAutomaton& obs, const StateId& x,
                                 const Automaton& projected_attack) {
  ReachResult out;
  // Pair BFS over (observer state or off-domain, attack-automaton state).
  const StateId off = "";  // internal marker, never a real observer state
  std::set<std::pair<StateId, StateId>> seen;
  std::deque<std::pair<StateId, StateId>> work;
  work.emplace_back(x, projected_attack.initial);
  seen.insert(work.back());
  while (!work.empty()) {
    auto [y, f] = work.front();
    work.pop_front();
    if (projected_attack.marked.count(f)) {
      if (y == off) {
        out.off_domain = true;
      } else {
        out.states.insert(y);
      }
    }
    auto it = projected_attack.transitions.find(f);
    if (it == projected_attack.transitions.end()) continue;
    for (const auto& [e, fdsts] : it->second) {
      StateId fn = *fdsts.begin();
      StateId yn = off;
      if (y != off) {
        auto next = obs.dfa.step(y, e);
        if (next) yn = *next;
      }
      if (seen.insert({yn, fn}).second) work.emplace_back(yn, fn);
    }
  }
  return out;
}

std::string node_key(const Tracker::Node& n) {
  std::string key = n.plant_state + "\x1f" + join(n.observer_states, "\x1f");
  if (n.off_domain) key += "\x1f!";
  return key;
}

}  // namespace

std::set<StateId> ObserverAutomaton::estimate_of(const StateId& x) const {
  std::set<StateId> out;
  auto it = subset_of.find(x);
  if (it == subset_of.end()) return out;
  for (const auto& q : it->second) {
    if (safe_states.count(q)) out.insert(q);
  }
  return out;
}

std::optional<std::size_t> Tracker::drive(const StringSeq& s) const {
  std::size_t cur = initial;
  for (const auto& e : s) {
    auto it = next.find({cur, e});
    if (it == next.end()) return std::nullopt;
    cur = it->second;
  }
  return cur;
}

std::vector<StringSeq> tracker_access_strings(const Tracker& t) {
  std::vector<StringSeq> access(t.nodes.size());
  std::vector<bool> found(t.nodes.size(), false);
  found[t.initial] = true;
  std::deque<std::size_t> work{t.initial};
  // next is ordered by (node index, event); node indices follow BFS
  // discovery, so a per-node sorted sweep yields shortest length-lex strings.
  std::map<std::size_t, std::vector<std::pair<EventId, std::size_t>>> out_edges;
  for (const auto& [key, dst] : t.next) out_edges[key.first].emplace_back(key.second, dst);
  while (!work.empty()) {
    std::size_t cur = work.front();
    work.pop_front();
    for (const auto& [e, dst] : out_edges[cur]) {
      if (found[dst]) continue;
      found[dst] = true;
      access[dst] = access[cur];
      access[dst].push_back(e);
      work.push_back(dst);
    }
  }
  return access;
}

ObserverAutomaton build_ca_observer(const Automaton& h, const AttackSpec& atk,
                                    const std::set<EventId>& observable) {
  atk.validate(h);
  Automaton ha = build_attacked_automaton(h, atk);
  Automaton heps = erase_unobservable(ha, observable);
  DeterminizeResult det = determinize_with_subsets(heps);
  ObserverAutomaton obs;
  obs.dfa = std::move(det.dfa);
  obs.dfa.name = h.name + ".obs";
  obs.subset_of = std::move(det.subset_of);
  obs.safe_states = h.states;
  return obs;
}

StateEstimate state_estimate(const ObserverAutomaton& obs, const StringSeq& w) {
  StateId cur = obs.dfa.initial;
  for (const auto& e : w) {
    auto next = obs.dfa.step(cur, e);
    if (!next) return StateEstimate{true, {}};
    cur = *next;
  }
  if (!obs.dfa.marked.count(cur)) return StateEstimate{true, {}};
  return StateEstimate{false, obs.estimate_of(cur)};
}

std::set<EventId> rho_disable(const std::set<StateId>& estimate, const Automaton& g,
                              const std::set<StateId>& safe) {
  std::set<EventId> out;
  for (const auto& q : estimate) {
    auto it = g.transitions.find(q);
    if (it == g.transitions.end()) continue;
    for (const auto& [e, dsts] : it->second) {
      for (const auto& dst : dsts) {
        if (!safe.count(dst)) out.insert(e);
      }
    }
  }
  return out;
}

Verdict check_ca_controllability(const Automaton& g, const Automaton& h, const Alphabet& alphabet) {
  if (!is_subautomaton(h, g)) {
    throw Error("'" + h.name + "' is not a sub-automaton of '" + g.name + "'");
  }
  std::set<EventId> hard = set_union(alphabet.uncontrollable(), alphabet.actuator_attackable);

  struct Node {
    StateId q;
    std::size_t parent;
    EventId via;
  };
  std::vector<Node> nodes{{h.initial, 0, ""}};
  std::set<StateId> seen{h.initial};
  auto access_string = [&](std::size_t i) {
    StringSeq s;
    while (i != 0) {
      s.push_back(nodes[i].via);
      i = nodes[i].parent;
    }
    std::reverse(s.begin(), s.end());
    return s;
  };

  for (std::size_t i = 0; i < nodes.size(); ++i) {
    StateId q = nodes[i].q;
    for (const auto& e : g.alphabet.events) {
      bool in_g = g.step(q, e).has_value();
      bool in_h = h.states.count(q) && h.step(q, e).has_value();
      if (in_g && !in_h && hard.count(e)) {
        StringSeq s = access_string(i);
        return Verdict{false, s, e,
                       "string '" + format_seq(s) + "' followed by unstoppable event '" + e +
                           "' stays in L(" + g.name + ") but leaves the safe language"};
      }
      if (in_h) {
        StateId dst = *h.step(q, e);
        if (seen.insert(dst).second) nodes.push_back({dst, i, e});
      }
    }
  }
  return Verdict{true, std::nullopt, std::nullopt, "CA-controllability holds"};
}

ObservationTracker::ObservationTracker(const ObserverAutomaton& obs, const AttackSpec& atk)
    : obs_(&obs), observable_(obs.dfa.alphabet.events) {
  for (const auto& [tr, f] : atk.entries) {
    projected_.emplace(tr, project(f, set_intersect(f.alphabet.events, observable_)));
  }
}

void ObservationTracker::step(const TransitionKey& tr, std::set<StateId>& w, bool& off) const {
  auto pj = projected_.find(tr);
  if (pj != projected_.end()) {
    std::set<StateId> out;
    bool out_off = off;  // the off-domain marker is absorbing (attack languages are nonempty)
    for (const auto& x : w) {
      ReachResult r = reach_through_attack(*obs_, x, pj->second);
      out.insert(r.states.begin(), r.states.end());
      out_off = out_off || r.off_domain;
    }
    w = std::move(out);
    off = out_off;
  } else if (observable_.count(tr.event)) {
    std::set<StateId> out;
    for (const auto& x : w) {
      auto y = obs_->dfa.step(x, tr.event);
      if (y) {
        out.insert(*y);
      } else {
        off = true;
      }
    }
    w = std::move(out);
  }
  // unobservable unattacked events leave the observation untouched
}

Tracker build_tracker_over(const Automaton& plant, const AttackSpec& atk,
                           const ObserverAutomaton& obs) {
  atk.validate(plant);
  ObservationTracker stepper(obs, atk);

  Tracker t;
  Tracker::Node init{plant.initial, {obs.dfa.initial}, false};
  std::map<std::string, std::size_t> index{{node_key(init), 0}};
  t.nodes.push_back(std::move(init));

  for (std::size_t i = 0; i < t.nodes.size(); ++i) {
    Tracker::Node cur = t.nodes[i];  // copy: nodes may reallocate below
    auto it = plant.transitions.find(cur.plant_state);
    if (it == plant.transitions.end()) continue;
    for (const auto& [e, dsts] : it->second) {
      StateId qn = *dsts.begin();
      Tracker::Node nxt{qn, cur.observer_states, cur.off_domain};
      stepper.step({cur.plant_state, e, qn}, nxt.observer_states, nxt.off_domain);
      std::string key = node_key(nxt);
      auto [slot, fresh] = index.emplace(key, t.nodes.size());
      if (fresh) t.nodes.push_back(std::move(nxt));
      t.next[{i, e}] = slot->second;
    }
  }
  return t;
}

Tracker build_tracker(const Automaton& g, const Automaton& h, const ObserverAutomaton& obs,
                      const AttackSpec& atk) {
  if (obs.safe_states != h.states) {
    throw Error("observer was not built from '" + h.name + "'");
  }
  return build_tracker_over(g, atk, obs);
}

Verdict check_ca_observability(const Automaton& g, const Automaton& h, const AttackSpec& atk,
                               const Alphabet& alphabet) {
  if (!is_subautomaton(h, g)) {
    throw Error("'" + h.name + "' is not a sub-automaton of '" + g.name + "'");
  }
  AttackSpec atk_h = atk.restricted_to(h);
  ObserverAutomaton obs = build_ca_observer(h, atk_h, alphabet.observable);
  Tracker t = build_tracker(h, h, obs, atk_h);

  // Every observation of a safe string stays inside the observer's marked
  // domain, so no tracker node can be off-domain here.
  std::map<StateId, std::set<EventId>> rho_of;
  for (const auto& [x, subset] : obs.subset_of) {
    rho_of[x] = rho_disable(obs.estimate_of(x), g, h.states);
  }

  std::vector<StringSeq> access = tracker_access_strings(t);
  for (std::size_t i = 0; i < t.nodes.size(); ++i) {
    const auto& node = t.nodes[i];
    assert(!node.off_domain);
    auto it = h.transitions.find(node.plant_state);
    if (it == h.transitions.end()) continue;
    for (const auto& [e, dsts] : it->second) {
      (void)dsts;
      bool justified = false;
      for (const auto& x : node.observer_states) {
        if (!rho_of.at(x).count(e)) {
          justified = true;
          break;
        }
      }
      if (!justified) {
        return Verdict{false, access[i], e,
                       "after '" + format_seq(access[i]) + "' every attacked observation forces '" +
                           e + "' to be disabled, yet it continues the safe language"};
      }
    }
  }
  return Verdict{true, std::nullopt, std::nullopt, "CA-observability holds"};
}

SupervisorRealization synthesize_ca_supervisor(const Automaton& g, const Automaton& h,
                                               const AttackSpec& atk, const Alphabet& alphabet,
                                               bool force) {
  Verdict cc = check_ca_controllability(g, h, alphabet);
  Verdict co = check_ca_observability(g, h, atk, alphabet);
  if (!force) {
    if (!cc.holds) throw Error("cannot synthesize: " + cc.detail);
    if (!co.holds) throw Error("cannot synthesize: " + co.detail);
  }

  SupervisorRealization sup;
  sup.name = h.name + ".sup";
  sup.plant_name = g.name;
  sup.local_alphabet = alphabet;
  sup.observer = build_ca_observer(h, atk.restricted_to(h), alphabet.observable);
  sup.off_domain_pattern = alphabet.uncontrollable();
  for (const auto& x : sup.observer.dfa.marked) {
    std::set<EventId> rho = rho_disable(sup.observer.estimate_of(x), g, h.states);
    sup.pattern_of[x] = set_union(set_minus(alphabet.events, rho), sup.off_domain_pattern);
  }
  return sup;
}

ControlPattern control_pattern(const SupervisorRealization& sup, const StringSeq& w) {
  StateId cur = sup.observer.dfa.initial;
  for (const auto& e : w) {
    auto next = sup.observer.dfa.step(cur, e);
    if (!next) return sup.off_domain_pattern;
    cur = *next;
  }
  auto it = sup.pattern_of.find(cur);
  if (it == sup.pattern_of.end()) return sup.off_domain_pattern;
  return it->second;
}

}  // namespace desa
