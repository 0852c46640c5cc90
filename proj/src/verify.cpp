#include "desa/verify.hpp"

#include <deque>
#include <random>
#include <sstream>

namespace desa {

namespace {

/// Deterministic, platform-stable randomness for the simulator.
struct Rng {
  std::mt19937_64 eng;
  explicit Rng(std::uint64_t seed) : eng(seed) {}
  std::uint64_t next() { return eng(); }
  std::size_t below(std::size_t n) {
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
      v = eng();
    } while (v >= limit);
    return static_cast<std::size_t>(v % n);
  }
  bool chance(double p) { return static_cast<double>(next() >> 11) * 0x1p-53 < p; }
};

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t run) {
  std::uint64_t z = seed + (run + 1) * 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Random walk through an attack automaton to a marked state. Stops at
/// marked states with the damping probability so cyclic attack languages
/// terminate almost surely; after a hard cap the walk follows shortest
/// paths to the nearest marked state.
StringSeq sample_marked_string(const Automaton& f, Rng& rng, double damping) {
  std::set<StateId> coaccessible;
  {
    std::map<StateId, std::vector<std::pair<EventId, StateId>>> reverse;
    for (const auto& [src, by_label] : f.transitions) {
      for (const auto& [e, dsts] : by_label) {
        for (const auto& dst : dsts) reverse[dst].emplace_back(e, src);
      }
    }
    std::deque<StateId> work(f.marked.begin(), f.marked.end());
    coaccessible.insert(f.marked.begin(), f.marked.end());
    while (!work.empty()) {
      StateId q = work.front();
      work.pop_front();
      for (const auto& [e, src] : reverse[q]) {
        if (coaccessible.insert(src).second) work.push_back(src);
      }
    }
  }
  // first edge of a shortest path toward a marked state, per state
  std::map<StateId, std::pair<EventId, StateId>> toward_marked;
  {
    std::deque<StateId> work(f.marked.begin(), f.marked.end());
    std::set<StateId> done(f.marked.begin(), f.marked.end());
    std::map<StateId, std::vector<std::pair<EventId, StateId>>> reverse;
    for (const auto& [src, by_label] : f.transitions) {
      for (const auto& [e, dsts] : by_label) {
        for (const auto& dst : dsts) reverse[dst].emplace_back(e, src);
      }
    }
    while (!work.empty()) {
      StateId q = work.front();
      work.pop_front();
      for (const auto& [e, src] : reverse[q]) {
        if (done.insert(src).second) {
          toward_marked[src] = {e, q};
          work.push_back(src);
        }
      }
    }
  }

  StringSeq out;
  StateId cur = f.initial;
  const std::size_t cap = 64 + 16 * f.states.size();
  for (;;) {
    std::vector<std::pair<EventId, StateId>> options;
    auto it = f.transitions.find(cur);
    if (it != f.transitions.end()) {
      for (const auto& [e, dsts] : it->second) {
        for (const auto& dst : dsts) {
          if (coaccessible.count(dst)) options.emplace_back(e, dst);
        }
      }
    }
    if (f.marked.count(cur) && (options.empty() || rng.chance(damping))) return out;
    if (out.size() >= cap) {
      while (!f.marked.count(cur)) {
        const auto& [e, dst] = toward_marked.at(cur);
        out.push_back(e);
        cur = dst;
      }
      return out;
    }
    const auto& [e, dst] = options[rng.below(options.size())];
    out.push_back(e);
    cur = dst;
  }
}

const ControlPattern& pattern_at(const SupervisorRealization& sup, const StateId& x) {
  auto it = sup.pattern_of.find(x);
  return it != sup.pattern_of.end() ? it->second : sup.off_domain_pattern;
}

bool pattern_allows(const SupervisorRealization& sup, const std::set<StateId>& w, bool off,
                    const EventId& e) {
  if (off && sup.off_domain_pattern.count(e)) return true;
  for (const auto& x : w) {
    if (pattern_at(sup, x).count(e)) return true;
  }
  return false;
}

/// Step machine for one or two supervisors running in conjunction over the
/// global plant. Only allowed transitions are recorded.
struct ConjMachine {
  struct Node {
    StateId q;
    std::vector<StateId> r;
    std::vector<std::set<StateId>> w;
    std::vector<bool> off;
  };
  std::vector<Node> nodes;
  std::map<std::pair<std::size_t, EventId>, std::size_t> next;
};

std::string conj_key(const ConjMachine::Node& n) {
  std::string key = n.q;
  for (std::size_t i = 0; i < n.r.size(); ++i) {
    key += "\x1f" + n.r[i] + "\x1f" + join(n.w[i], "\x1f");
    if (n.off[i]) key += "!";
  }
  return key;
}

ConjMachine build_conjunction_machine(const Automaton& g,
                                      const std::vector<const LocalLoop*>& loops) {
  g.validate();
  g.require_deterministic("global plant '" + g.name + "'");
  std::vector<ObservationTracker> steppers;
  for (const auto* l : loops) {
    l->plant.require_deterministic("local plant '" + l->plant.name + "'");
    l->attack.validate(l->plant);
    if (l->sup.local_alphabet.events != l->plant.alphabet.events) {
      throw Error("supervisor alphabet does not match local plant '" + l->plant.name + "'");
    }
    steppers.emplace_back(l->sup.observer, l->attack);
  }
  for (const auto& e : g.alphabet.events) {
    bool owned = false;
    for (const auto* l : loops) owned = owned || l->plant.alphabet.contains(e);
    if (!owned) throw Error("global event '" + e + "' belongs to no local alphabet");
  }
  std::set<EventId> uc = g.alphabet.uncontrollable();

  ConjMachine m;
  ConjMachine::Node init;
  init.q = g.initial;
  for (const auto* l : loops) {
    init.r.push_back(l->plant.initial);
    init.w.push_back({l->sup.observer.dfa.initial});
    init.off.push_back(false);
  }
  std::map<std::string, std::size_t> index{{conj_key(init), 0}};
  m.nodes.push_back(std::move(init));

  for (std::size_t i = 0; i < m.nodes.size(); ++i) {
    ConjMachine::Node cur = m.nodes[i];  // copy: nodes may reallocate below
    auto it = g.transitions.find(cur.q);
    if (it == g.transitions.end()) continue;
    for (const auto& [e, dsts] : it->second) {
      bool allowed = uc.count(e) > 0;
      if (!allowed) {
        allowed = true;
        for (std::size_t s = 0; s < loops.size() && allowed; ++s) {
          if (!loops[s]->plant.alphabet.contains(e)) continue;
          allowed = loops[s]->sup.local_alphabet.actuator_attackable.count(e) ||
                    pattern_allows(loops[s]->sup, cur.w[s], cur.off[s], e);
        }
      }
      if (!allowed) continue;
      ConjMachine::Node nxt = cur;
      nxt.q = *dsts.begin();
      for (std::size_t s = 0; s < loops.size(); ++s) {
        if (!loops[s]->plant.alphabet.contains(e)) continue;
        auto rn = loops[s]->plant.step(cur.r[s], e);
        if (!rn) {
          throw Error("local plant '" + loops[s]->plant.name +
                      "' cannot follow global event '" + e + "'");
        }
        bool off = nxt.off[s];
        steppers[s].step({cur.r[s], e, *rn}, nxt.w[s], off);
        nxt.off[s] = off;
        nxt.r[s] = *rn;
      }
      std::string key = conj_key(nxt);
      auto [slot, fresh] = index.emplace(key, m.nodes.size());
      if (fresh) m.nodes.push_back(std::move(nxt));
      m.next[{i, e}] = slot->second;
    }
  }
  return m;
}

Automaton machine_to_automaton(const ConjMachine& m, const Automaton& g, const std::string& name) {
  Automaton out;
  out.name = name;
  out.alphabet = g.alphabet;
  out.initial = "n0";
  for (std::size_t i = 0; i < m.nodes.size(); ++i) out.add_state("n" + std::to_string(i));
  for (const auto& [key, dst] : m.next) {
    out.add_transition("n" + std::to_string(key.first), key.second,
                       "n" + std::to_string(dst));
  }
  return out;
}

std::vector<std::pair<EventId, std::size_t>> machine_edges(const ConjMachine& m, std::size_t i) {
  std::vector<std::pair<EventId, std::size_t>> out;
  for (auto it = m.next.lower_bound({i, ""}); it != m.next.end() && it->first.first == i; ++it) {
    out.emplace_back(it->first.second, it->second);
  }
  return out;
}

}  // namespace

Automaton large_language(const Automaton& g, const SupervisorRealization& sup,
                         const AttackSpec& atk) {
  g.validate();
  g.require_deterministic("plant '" + g.name + "'");
  if (sup.local_alphabet.events != g.alphabet.events) {
    throw Error("supervisor alphabet does not match plant '" + g.name + "'");
  }
  Tracker t = build_tracker_over(g, atk, sup.observer);
  std::set<EventId> uc = sup.local_alphabet.uncontrollable();
  const std::set<EventId>& ca = sup.local_alphabet.actuator_attackable;

  auto public_name = [](const Tracker::Node& n) {
    std::string s = n.plant_state + "#" + subset_name(n.observer_states);
    if (n.off_domain) s += "!";
    return s;
  };

  std::map<std::size_t, std::vector<std::pair<EventId, std::size_t>>> edges;
  for (const auto& [key, dst] : t.next) edges[key.first].emplace_back(key.second, dst);

  Automaton out;
  out.name = g.name + ".la";
  out.alphabet = g.alphabet;
  out.initial = public_name(t.nodes[t.initial]);
  out.add_state(out.initial);

  std::deque<std::size_t> work{t.initial};
  std::set<std::size_t> visited{t.initial};
  while (!work.empty()) {
    std::size_t i = work.front();
    work.pop_front();
    const Tracker::Node& node = t.nodes[i];
    for (const auto& [e, j] : edges[i]) {
      if (!uc.count(e) && !ca.count(e) &&
          !pattern_allows(sup, node.observer_states, node.off_domain, e)) {
        continue;
      }
      StateId dst = public_name(t.nodes[j]);
      out.add_state(dst);
      out.add_transition(public_name(node), e, dst);
      if (visited.insert(j).second) work.push_back(j);
    }
  }
  return out;
}

std::vector<StringSeq> large_language_bounded(const Automaton& g, const SupervisorRealization& sup,
                                              const AttackSpec& atk, std::size_t depth) {
  g.require_deterministic("plant '" + g.name + "'");
  atk.validate(g);
  std::size_t max_factor = 1;
  for (const auto& [tr, f] : atk.entries) max_factor = std::max(max_factor, f.states.size());

  std::set<EventId> uc = sup.local_alphabet.uncontrollable();
  const std::set<EventId>& ca = sup.local_alphabet.actuator_attackable;

  struct Item {
    StringSeq s;
    StateId q;
  };
  std::vector<StringSeq> out{{}};
  std::vector<Item> frontier{{{}, g.initial}};
  for (std::size_t len = 1; len <= depth && !frontier.empty(); ++len) {
    std::vector<Item> next_frontier;
    for (const auto& item : frontier) {
      auto it = g.transitions.find(item.q);
      if (it == g.transitions.end()) continue;
      std::optional<std::vector<StringSeq>> observations;
      for (const auto& [e, dsts] : it->second) {
        bool enabled = uc.count(e) || ca.count(e);
        if (!enabled) {
          if (!observations) {
            std::size_t bound = item.s.size() * max_factor + 1;
            observations =
                enumerate_language(phi_automaton(g, atk, item.s), bound, LanguageKind::Marked);
          }
          for (const auto& w : *observations) {
            if (control_pattern(sup, w).count(e)) {
              enabled = true;
              break;
            }
          }
        }
        if (!enabled) continue;
        Item child{item.s, *dsts.begin()};
        child.s.push_back(e);
        out.push_back(child.s);
        next_frontier.push_back(std::move(child));
      }
    }
    frontier = std::move(next_frontier);
  }
  return out;
}

Automaton conjunction_large_language(const Automaton& g, const LocalLoop& l1,
                                     const LocalLoop& l2) {
  ConjMachine m = build_conjunction_machine(g, {&l1, &l2});
  return machine_to_automaton(m, g, g.name + ".conj");
}

TheoremReport verify_theorems(const CoordinationOutcome& outcome) {
  if (!outcome.success) {
    throw Error("coordination synthesis did not produce supervisors; nothing to verify");
  }
  std::array<Automaton, 2> la;
  std::array<LocalLoop, 2> loops;
  for (int i = 0; i < 2; ++i) {
    const LocalSynthesis& local = outcome.local[i];
    la[i] = large_language(local.plant, *local.supervisor, local.attack);
    loops[i] = LocalLoop{local.plant, local.attack, *local.supervisor};
  }
  Automaton conj = conjunction_large_language(outcome.global_plant, loops[0], loops[1]);
  Automaton both = compose_parallel(la[0], la[1]);

  TheoremReport report;
  report.factorization = compare_languages(conj, both, CompareMode::Equality);
  for (int i = 0; i < 2; ++i) {
    report.local_achieves[i] =
        compare_languages(la[i], outcome.local[i].safe_automaton, CompareMode::Equality);
  }
  report.global_achieves = compare_languages(conj, outcome.k, CompareMode::Equality);
  return report;
}

const char* to_string(AttackerMode mode) {
  return mode == AttackerMode::Random ? "random" : "maximal";
}

std::string SimReport::to_text() const {
  std::ostringstream os;
  os << "simulation report\n";
  os << "seed: " << seed << "\n";
  os << "attacker: " << to_string(attacker_mode) << "\n";
  os << "runs: " << runs_executed << "\n";
  os << "max-depth: " << max_depth << "\n";
  os << "coverage: " << coverage << "\n";
  os << "violations: " << violations.size() << "\n";
  for (const auto& v : violations) {
    os << "violation: run " << v.run << " position " << v.first_unsafe << ": "
       << format_seq(v.executed) << "\n";
  }
  return os.str();
}

SimReport simulate_closed_loop(const Automaton& g, const std::vector<LocalLoop>& loops,
                               const Automaton& k, const SimConfig& cfg) {
  if (cfg.runs < 1 || cfg.max_depth < 1) throw Error("simulation needs runs >= 1 and depth >= 1");
  if (loops.empty() || loops.size() > 2) throw Error("simulation supports one or two supervisors");
  k.require_deterministic("specification '" + k.name + "'");

  std::vector<const LocalLoop*> loop_ptrs;
  for (const auto& l : loops) loop_ptrs.push_back(&l);
  ConjMachine machine = build_conjunction_machine(g, loop_ptrs);

  std::set<EventId> uc = g.alphabet.uncontrollable();

  SimReport report;
  report.runs_executed = cfg.runs;
  report.max_depth = cfg.max_depth;
  report.attacker_mode = cfg.attacker_mode;
  report.seed = cfg.seed;

  std::set<StringSeq> distinct;
  for (std::size_t run = 0; run < cfg.runs; ++run) {
    Rng rng(mix_seed(cfg.seed, run));
    RunTrace trace;
    StringSeq executed;
    StateId qg = g.initial;
    std::optional<StateId> k_state = k.initial;
    bool violated = false;

    std::vector<StateId> r;
    std::vector<StringSeq> observed;
    for (const auto& l : loops) {
      r.push_back(l.plant.initial);
      observed.emplace_back();
    }
    std::size_t machine_node = 0;

    for (std::size_t step = 0; step < cfg.max_depth; ++step) {
      std::vector<ControlPattern> issued(loops.size());
      std::vector<ControlPattern> applied(loops.size());
      std::vector<EventId> enabled;

      if (cfg.attacker_mode == AttackerMode::EnablingMaximal) {
        for (const auto& [e, dst] : machine_edges(machine, machine_node)) enabled.push_back(e);
        const auto& node = machine.nodes[machine_node];
        for (std::size_t i = 0; i < loops.size(); ++i) {
          ControlPattern eff = set_intersect(uc, loops[i].plant.alphabet.events);
          eff = set_union(eff, loops[i].sup.local_alphabet.actuator_attackable);
          for (const auto& x : node.w[i]) {
            eff = set_union(eff, pattern_at(loops[i].sup, x));
          }
          if (node.off[i]) eff = set_union(eff, loops[i].sup.off_domain_pattern);
          applied[i] = eff;
        }
      } else {
        for (std::size_t i = 0; i < loops.size(); ++i) {
          issued[i] = control_pattern(loops[i].sup, observed[i]);
          ControlPattern tampered = issued[i];
          for (const auto& e : loops[i].sup.local_alphabet.actuator_attackable) {
            if (rng.chance(0.5)) tampered.erase(e);   // removal choice
            if (rng.chance(0.5)) tampered.insert(e);  // insertion choice
          }
          applied[i] = tampered;
        }
        auto it = g.transitions.find(qg);
        if (it != g.transitions.end()) {
          for (const auto& [e, dsts] : it->second) {
            (void)dsts;
            bool ok = uc.count(e) > 0;
            if (!ok) {
              ok = true;
              for (std::size_t i = 0; i < loops.size() && ok; ++i) {
                if (!loops[i].plant.alphabet.contains(e)) continue;
                ok = applied[i].count(e) > 0;
              }
            }
            if (ok) enabled.push_back(e);
          }
        }
      }
      if (enabled.empty()) break;
      EventId chosen = enabled[rng.below(enabled.size())];

      RunTrace::Step row;
      row.event = chosen;
      row.issued = issued;
      row.applied = applied;
      row.observed.resize(loops.size());

      StateId qn = *g.step(qg, chosen);
      for (std::size_t i = 0; i < loops.size(); ++i) {
        const LocalLoop& l = loops[i];
        if (!l.plant.alphabet.contains(chosen)) continue;
        auto rn = l.plant.step(r[i], chosen);
        if (!rn) {
          throw Error("local plant '" + l.plant.name + "' cannot follow global event '" +
                      chosen + "'");
        }
        const Automaton* f = l.attack.language_for({r[i], chosen, *rn});
        StringSeq fragment;
        if (f) {
          StringSeq raw = sample_marked_string(*f, rng, cfg.damping);
          for (const auto& e : raw) {
            if (l.sup.local_alphabet.observable.count(e)) fragment.push_back(e);
          }
        } else if (l.sup.local_alphabet.observable.count(chosen)) {
          fragment.push_back(chosen);
        }
        observed[i].insert(observed[i].end(), fragment.begin(), fragment.end());
        row.observed[i] = std::move(fragment);
        r[i] = *rn;
      }
      qg = qn;
      if (cfg.attacker_mode == AttackerMode::EnablingMaximal) {
        machine_node = machine.next.at({machine_node, chosen});
      }
      executed.push_back(chosen);
      if (k_state) {
        k_state = k.step(*k_state, chosen);
        if (!k_state && !violated) {
          violated = true;
          report.violations.push_back({run, executed, executed.size()});
        }
      }
      trace.steps.push_back(std::move(row));
    }
    distinct.insert(executed);
    if (cfg.keep_traces) report.traces.push_back(std::move(trace));
  }
  report.coverage = distinct.size();
  return report;
}

}  // namespace desa
