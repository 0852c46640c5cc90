#pragma once

#include <random>

#include "desa/model_io.hpp"

// Shared fixtures, brute-force oracles and random instance generators for
// the test suites. Oracles evaluate the definitions directly and never go
// through the constructions they are used to check.

namespace fx {

using namespace desa;

inline Alphabet alphabet(const std::vector<EventId>& events,
                         const std::set<EventId>& unobservable = {},
                         const std::set<EventId>& uncontrollable = {},
                         const std::set<EventId>& sen = {}, const std::set<EventId>& act = {}) {
  Alphabet a;
  for (const auto& e : events) {
    a.events.insert(e);
    if (!unobservable.count(e)) a.observable.insert(e);
    if (!uncontrollable.count(e)) a.controllable.insert(e);
  }
  a.sensor_attackable = sen;
  a.actuator_attackable = act;
  a.validate();
  return a;
}

// q0 -a-> q1 -b-> q2; everything observable and controllable.
inline Automaton fix_lin(const std::set<EventId>& act_attack = {}) {
  return make_automaton("FIX-LIN", alphabet({"a", "b"}, {}, {}, {"a", "b"}, act_attack), "q0",
                        {{"q0", "a", "q1"}, {"q1", "b", "q2"}});
}

inline Automaton fix_safe(const std::set<EventId>& act_attack = {}) {
  Automaton h = restrict_to_safe_states(fix_lin(act_attack), {"q0", "q1"});
  h.name = "FIX-SAFE";
  return h;
}

inline Automaton deletion_language(const Alphabet& alph) {
  Automaton f;
  f.name = "F-DEL";
  f.alphabet = alph;
  f.initial = "f0";
  f.states = {"f0"};
  f.marked = {"f0"};
  return f;
}

// attack on (q0,a,q1) with A = {epsilon}: pure deletion of a
inline AttackSpec fix_del_attack(const std::set<EventId>& act_attack = {}) {
  AttackSpec atk;
  atk.plant_name = "FIX-LIN";
  atk.entries.emplace(TransitionKey{"q0", "a", "q1"}, deletion_language(fix_lin(act_attack).alphabet));
  return atk;
}

// q0 -a-> q1, q0 -b-> q2, q1 -c-> q3, q2 -c-> q4; x is a fresh observable event
inline Automaton fix_conf() {
  return make_automaton("FIX-CONF", alphabet({"a", "b", "c", "x"}, {}, {}, {"a", "b"}), "q0",
                        {{"q0", "a", "q1"}, {"q0", "b", "q2"}, {"q1", "c", "q3"}, {"q2", "c", "q4"}});
}

inline std::set<StateId> fix_conf_safe() { return {"q0", "q1", "q2", "q3"}; }

// both branch transitions replaced by the single observation x
inline AttackSpec fix_conf_attack() {
  Automaton f = make_automaton("F-X", fix_conf().alphabet, "f0", {{"f0", "x", "f1"}}, {{"f1"}});
  AttackSpec atk;
  atk.plant_name = "FIX-CONF";
  atk.entries.emplace(TransitionKey{"q0", "a", "q1"}, f);
  atk.entries.emplace(TransitionKey{"q0", "b", "q2"}, f);
  return atk;
}

inline Automaton fix_coord_g1() {
  return make_automaton("G1", alphabet({"a", "c"}), "p0", {{"p0", "a", "p1"}, {"p1", "c", "p2"}});
}

inline Automaton fix_coord_g2() {
  return make_automaton("G2", alphabet({"b", "c"}), "r0", {{"r0", "c", "r1"}, {"r1", "b", "r2"}});
}

// closure of {ac} over the full alphabet {a,b,c}
inline Automaton fix_coord_k() {
  return make_automaton("K", alphabet({"a", "b", "c"}), "k0", {{"k0", "a", "k1"}, {"k1", "c", "k2"}});
}

inline AttackSpec no_attack(const Automaton& plant) {
  AttackSpec atk;
  atk.plant_name = plant.name;
  return atk;
}

// attack on (q0,a,q1) with A = {a, aa}
inline AttackSpec lin_ins_attack() {
  Automaton f = make_automaton("F-AA", fix_lin().alphabet, "f0",
                               {{"f0", "a", "f1"}, {"f1", "a", "f2"}}, {{"f1", "f2"}});
  AttackSpec atk;
  atk.plant_name = "FIX-LIN";
  atk.entries.emplace(TransitionKey{"q0", "a", "q1"}, f);
  return atk;
}

inline StringSeq seq(std::initializer_list<const char*> events) {
  StringSeq s;
  for (const char* e : events) s.emplace_back(e);
  return s;
}

inline std::set<StringSeq> to_set(const std::vector<StringSeq>& v) {
  return std::set<StringSeq>(v.begin(), v.end());
}

inline std::set<StringSeq> lang_gen(const Automaton& a, std::size_t n) {
  return to_set(enumerate_language(a, n, LanguageKind::Generated));
}

inline std::set<StringSeq> lang_marked(const Automaton& a, std::size_t n) {
  return to_set(enumerate_language(a, n, LanguageKind::Marked));
}

}  // namespace fx

namespace oracle {

using namespace desa;

// Depth-first marked-language enumeration, independent of the library's
// breadth-first enumerator.
inline void enum_marked_rec(const Automaton& a, const std::set<StateId>& cur, StringSeq& prefix,
                            std::size_t max_len, std::set<StringSeq>& out) {
  for (const auto& q : cur) {
    if (a.marked.count(q)) {
      out.insert(prefix);
      break;
    }
  }
  if (prefix.size() == max_len) return;
  std::set<EventId> labels;
  for (const auto& q : cur) {
    auto it = a.transitions.find(q);
    if (it == a.transitions.end()) continue;
    for (const auto& [label, dsts] : it->second) {
      if (label != kEpsilon && !dsts.empty()) labels.insert(label);
    }
  }
  for (const auto& e : labels) {
    std::set<StateId> next = a.epsilon_closure(a.step_set(cur, e));
    if (next.empty()) continue;
    prefix.push_back(e);
    enum_marked_rec(a, next, prefix, max_len, out);
    prefix.pop_back();
  }
}

inline std::set<StringSeq> enum_marked(const Automaton& a, std::size_t max_len) {
  std::set<StringSeq> out;
  StringSeq prefix;
  std::set<StateId> start = a.epsilon_closure({a.initial});
  enum_marked_rec(a, start, prefix, max_len, out);
  return out;
}

// Theta by its definition: the concatenation of per-position factor
// languages along the unique run of the plant.
inline std::set<StringSeq> theta_strings(const Automaton& g, const AttackSpec& atk,
                                         const StringSeq& s, std::size_t max_out_len) {
  std::set<StringSeq> acc{{}};
  StateId q = g.initial;
  for (const auto& e : s) {
    StateId next = *g.step(q, e);
    std::set<StringSeq> factor;
    if (const Automaton* f = atk.language_for({q, e, next})) {
      factor = enum_marked(*f, max_out_len);
    } else {
      factor = {{e}};
    }
    std::set<StringSeq> grown;
    for (const auto& head : acc) {
      for (const auto& tail : factor) {
        if (head.size() + tail.size() > max_out_len) continue;
        StringSeq joined = head;
        joined.insert(joined.end(), tail.begin(), tail.end());
        grown.insert(std::move(joined));
      }
    }
    acc = std::move(grown);
    q = next;
  }
  return acc;
}

inline StringSeq project_string(const StringSeq& s, const std::set<EventId>& target) {
  StringSeq out;
  for (const auto& e : s) {
    if (target.count(e)) out.push_back(e);
  }
  return out;
}

inline std::set<StringSeq> phi_strings(const Automaton& g, const AttackSpec& atk,
                                       const StringSeq& s, std::size_t max_out_len) {
  std::set<StringSeq> out;
  for (const auto& t : theta_strings(g, atk, s, max_out_len)) {
    out.insert(project_string(t, g.alphabet.observable));
  }
  return out;
}

// State estimate by its definition: all safe states reached by safe strings
// with the given observation. Exact on acyclic plants when depth covers the
// longest path.
inline std::set<StateId> estimate_brute(const Automaton& h, const AttackSpec& atk,
                                        const StringSeq& w, std::size_t depth,
                                        std::size_t obs_len) {
  std::set<StateId> out;
  for (const auto& s : enumerate_language(h, depth, LanguageKind::Generated)) {
    if (phi_strings(h, atk, s, obs_len).count(w)) out.insert(*h.run(s));
  }
  return out;
}

// Definition of CA-observability, evaluated directly over bounded strings.
inline bool ca_observable_brute(const Automaton& g, const Automaton& h, const AttackSpec& atk,
                                std::size_t depth, std::size_t obs_len) {
  AttackSpec atk_g = atk;
  atk_g.plant_name = g.name;
  std::vector<StringSeq> safe_strings = enumerate_language(h, depth, LanguageKind::Generated);
  std::set<StringSeq> safe_set(safe_strings.begin(), safe_strings.end());
  std::vector<StringSeq> plant_strings = enumerate_language(g, depth, LanguageKind::Generated);
  for (const auto& s : safe_strings) {
    for (const auto& e : g.alphabet.events) {
      StringSeq se = s;
      se.push_back(e);
      if (!safe_set.count(se)) continue;  // only continuations inside K matter
      bool some_w_good = false;
      for (const auto& w : phi_strings(g, atk_g, s, obs_len)) {
        bool all_preimages_fine = true;
        for (const auto& sp : plant_strings) {
          if (!phi_strings(g, atk_g, sp, obs_len).count(w)) continue;
          if (!safe_set.count(sp)) continue;
          StringSeq spe = sp;
          spe.push_back(e);
          if (accepts(g, spe) && !safe_set.count(spe)) {
            all_preimages_fine = false;
            break;
          }
        }
        if (all_preimages_fine) {
          some_w_good = true;
          break;
        }
      }
      if (!some_w_good) return false;
    }
  }
  return true;
}

inline bool classical_controllable_brute(const Automaton& g, const Automaton& h,
                                         const std::set<EventId>& uncontrollable,
                                         std::size_t depth) {
  std::set<StringSeq> safe_set = fx::to_set(enumerate_language(h, depth + 1));
  for (const auto& s : enumerate_language(h, depth)) {
    for (const auto& e : uncontrollable) {
      StringSeq se = s;
      se.push_back(e);
      if (accepts(g, se) && !safe_set.count(se)) return false;
    }
  }
  return true;
}

inline bool classical_observable_brute(const Automaton& g, const Automaton& h,
                                       const std::set<EventId>& observable, std::size_t depth) {
  std::set<StringSeq> safe_set = fx::to_set(enumerate_language(h, depth + 1));
  std::vector<StringSeq> safe_strings = enumerate_language(h, depth);
  for (const auto& s : safe_strings) {
    for (const auto& sp : safe_strings) {
      if (project_string(s, observable) != project_string(sp, observable)) continue;
      for (const auto& e : g.alphabet.events) {
        StringSeq se = s;
        se.push_back(e);
        StringSeq spe = sp;
        spe.push_back(e);
        if (safe_set.count(se) && accepts(g, spe) && !safe_set.count(spe)) return false;
      }
    }
  }
  return true;
}

// W(s) by definition: observer states (or the off-domain marker) reached by
// the attacked observations of s.
struct BruteW {
  std::set<StateId> states;
  bool off_domain = false;
};

inline BruteW tracker_w_brute(const ObserverAutomaton& obs, const Automaton& plant,
                              const AttackSpec& atk, const StringSeq& s, std::size_t obs_len) {
  BruteW out;
  for (const auto& w : phi_strings(plant, atk, s, obs_len)) {
    StateId cur = obs.dfa.initial;
    bool dead = false;
    for (const auto& e : w) {
      auto next = obs.dfa.step(cur, e);
      if (!next) {
        dead = true;
        break;
      }
      cur = *next;
    }
    if (dead) {
      out.off_domain = true;
    } else {
      out.states.insert(cur);
    }
  }
  return out;
}

// Observer property by its definition, on bounded strings: whenever the
// projection allows a coordinator event after P(s), some extension of s by
// non-coordinator events must reach it in the plant.
inline bool observer_property_brute(const Automaton& l, const std::set<EventId>& sk,
                                    std::size_t depth) {
  std::set<EventId> skl = set_intersect(sk, l.alphabet.events);
  std::set<StringSeq> projections;
  for (const auto& s : enumerate_language(l, depth + 1)) {
    projections.insert(project_string(s, skl));
  }
  for (const auto& s : enumerate_language(l, depth)) {
    for (const auto& e : skl) {
      StringSeq pe = project_string(s, skl);
      pe.push_back(e);
      if (!projections.count(pe)) continue;
      bool reachable = false;
      StateId q = *l.run(s);
      std::set<StateId> seen{q};
      std::vector<StateId> work{q};
      while (!work.empty() && !reachable) {
        StateId cur = work.back();
        work.pop_back();
        if (l.step(cur, e)) {
          reachable = true;
          break;
        }
        auto it = l.transitions.find(cur);
        if (it == l.transitions.end()) continue;
        for (const auto& [label, dsts] : it->second) {
          if (skl.count(label)) continue;
          for (const auto& dst : dsts) {
            if (seen.insert(dst).second) work.push_back(dst);
          }
        }
      }
      if (!reachable) return false;
    }
  }
  return true;
}

}  // namespace oracle

namespace gen {

using namespace desa;

inline Automaton random_plant(std::mt19937_64& rng, int max_states = 8, int max_events = 4,
                              const Alphabet* fixed_alphabet = nullptr) {
  auto pick = [&](int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
  };
  auto chance = [&](double p) { return (rng() >> 11) * 0x1p-53 < p; };

  int n = pick(2, max_states);
  int ne = pick(1, max_events);
  static const std::vector<EventId> pool = {"a", "b", "c", "d"};

  Alphabet alph;
  if (fixed_alphabet) {
    alph = *fixed_alphabet;
  } else {
    for (int i = 0; i < ne; ++i) {
      const EventId& e = pool[i];
      alph.events.insert(e);
      bool obs = chance(0.8);
      bool ctrl = chance(0.75);
      if (obs) alph.observable.insert(e);
      if (ctrl) alph.controllable.insert(e);
      if (obs && chance(0.5)) alph.sensor_attackable.insert(e);
      if (ctrl && chance(0.35)) alph.actuator_attackable.insert(e);
    }
  }

  Automaton a;
  a.name = "R";
  a.alphabet = alph;
  for (int i = 0; i < n; ++i) a.states.insert("q" + std::to_string(i));
  a.initial = "q0";
  a.marked = a.states;
  for (int i = 0; i + 1 < n; ++i) {
    for (const auto& e : alph.events) {
      if (!chance(0.45)) continue;
      int j = pick(i + 1, n - 1);
      a.add_transition("q" + std::to_string(i), e, "q" + std::to_string(j));
    }
  }
  if (a.transitions.find("q0") == a.transitions.end() && n > 1) {
    a.add_transition("q0", *alph.events.begin(), "q1");
  }
  a.validate();
  return a;
}

inline Automaton random_attack_language(std::mt19937_64& rng, const Alphabet& plant_alphabet,
                                        int max_states = 3) {
  auto pick = [&](int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
  };
  auto chance = [&](double p) { return (rng() >> 11) * 0x1p-53 < p; };
  std::vector<EventId> events(plant_alphabet.events.begin(), plant_alphabet.events.end());

  int n = pick(1, max_states);
  Automaton f;
  f.name = "F";
  f.alphabet = plant_alphabet;
  for (int i = 0; i < n; ++i) f.states.insert("f" + std::to_string(i));
  f.initial = "f0";
  for (int i = 0; i + 1 < n; ++i) {
    int added = 0;
    for (const auto& e : events) {
      if (!chance(0.5)) continue;
      int j = pick(i + 1, n - 1);
      f.add_transition("f" + std::to_string(i), e, "f" + std::to_string(j));
      ++added;
    }
    if (added == 0) {
      f.add_transition("f" + std::to_string(i), events[pick(0, (int)events.size() - 1)],
                       "f" + std::to_string(i + 1));
    }
  }
  // mark a nonempty reachable subset
  std::set<StateId> reachable{f.initial};
  for (const auto& [src, by_label] : f.transitions) {
    for (const auto& [e, dsts] : by_label) {
      (void)e;
      reachable.insert(dsts.begin(), dsts.end());
    }
  }
  for (const auto& q : reachable) {
    if (chance(0.4)) f.marked.insert(q);
  }
  if (f.marked.empty()) f.marked.insert(chance(0.5) ? f.initial : *reachable.rbegin());
  f.validate();
  return f;
}

inline AttackSpec random_attack(std::mt19937_64& rng, const Automaton& plant, int max_entries = 2) {
  auto chance = [&](double p) { return (rng() >> 11) * 0x1p-53 < p; };
  std::vector<TransitionKey> candidates;
  for (const auto& [src, by_label] : plant.transitions) {
    for (const auto& [e, dsts] : by_label) {
      if (!plant.alphabet.sensor_attackable.count(e)) continue;
      for (const auto& dst : dsts) candidates.push_back({src, e, dst});
    }
  }
  AttackSpec atk;
  atk.plant_name = plant.name;
  int taken = 0;
  for (const auto& tr : candidates) {
    if (taken >= max_entries) break;
    if (!chance(0.6)) continue;
    Automaton f = random_attack_language(rng, plant.alphabet);
    f.name = "F" + std::to_string(taken);
    atk.entries.emplace(tr, std::move(f));
    ++taken;
  }
  return atk;
}

inline std::set<StateId> random_safe(std::mt19937_64& rng, const Automaton& plant) {
  auto chance = [&](double p) { return (rng() >> 11) * 0x1p-53 < p; };
  std::set<StateId> safe{plant.initial};
  for (const auto& q : plant.states) {
    if (chance(0.65)) safe.insert(q);
  }
  return safe;
}

}  // namespace gen
