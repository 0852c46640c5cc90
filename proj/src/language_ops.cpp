#include "desa/language_ops.hpp"

#include <deque>

namespace desa {

namespace {

std::string pair_name(const StateId& a, const StateId& b) { return "(" + a + "," + b + ")"; }

StateId fresh_state_name(const std::set<StateId>& taken, std::string base) {
  while (taken.count(base)) base += "'";
  return base;
}

}  // namespace

std::string subset_name(const std::set<StateId>& subset) {
  return "{" + join(subset, ",") + "}";
}

ParallelComposition compose_parallel_tracked(const Automaton& a, const Automaton& b) {
  a.validate();
  b.validate();
  a.require_deterministic("composition input '" + a.name + "'");
  b.require_deterministic("composition input '" + b.name + "'");

  ParallelComposition out;
  Automaton& p = out.product;
  p.name = a.name + "||" + b.name;
  p.alphabet = Alphabet::merged(a.alphabet, b.alphabet);

  p.initial = pair_name(a.initial, b.initial);
  p.states.insert(p.initial);
  out.parts[p.initial] = {a.initial, b.initial};

  std::deque<StateId> work{p.initial};
  while (!work.empty()) {
    StateId cur = work.front();
    work.pop_front();
    auto [qa, qb] = out.parts.at(cur);
    for (const auto& e : p.alphabet.events) {
      bool in_a = a.alphabet.contains(e);
      bool in_b = b.alphabet.contains(e);
      StateId na = qa;
      StateId nb = qb;
      if (in_a) {
        auto next = a.step(qa, e);
        if (!next) continue;
        na = *next;
      }
      if (in_b) {
        auto next = b.step(qb, e);
        if (!next) continue;
        nb = *next;
      }
      StateId dst = pair_name(na, nb);
      if (!p.states.count(dst)) {
        p.states.insert(dst);
        out.parts[dst] = {na, nb};
        work.push_back(dst);
      }
      p.add_transition(cur, e, dst);
    }
  }
  for (const auto& [q, comp] : out.parts) {
    if (a.marked.count(comp.first) && b.marked.count(comp.second)) p.marked.insert(q);
  }
  return out;
}

Automaton compose_parallel(const Automaton& a, const Automaton& b) {
  return compose_parallel_tracked(a, b).product;
}

Automaton project(const Automaton& a, const std::set<EventId>& target) {
  a.validate();
  for (const auto& e : target) {
    if (!a.alphabet.contains(e)) {
      throw Error("projection target event '" + e + "' is not in the alphabet of '" + a.name + "'");
    }
  }
  Automaton relabeled = a;
  relabeled.alphabet = a.alphabet.restricted_to(target);
  relabeled.transitions.clear();
  for (const auto& [src, by_label] : a.transitions) {
    for (const auto& [label, dsts] : by_label) {
      EventId out_label = (label != kEpsilon && target.count(label)) ? label : kEpsilon;
      for (const auto& dst : dsts) relabeled.add_transition(src, out_label, dst);
    }
  }
  return determinize(relabeled);
}

DeterminizeResult determinize_with_subsets(const Automaton& a) {
  a.validate();
  DeterminizeResult out;
  Automaton& dfa = out.dfa;
  dfa.name = a.name;
  dfa.alphabet = a.alphabet;

  std::set<StateId> start = a.epsilon_closure({a.initial});
  dfa.initial = subset_name(start);
  dfa.states.insert(dfa.initial);
  out.subset_of[dfa.initial] = start;

  std::deque<StateId> work{dfa.initial};
  while (!work.empty()) {
    StateId cur = work.front();
    work.pop_front();
    const auto& subset = out.subset_of.at(cur);
    std::set<EventId> labels;
    for (const auto& q : subset) {
      auto it = a.transitions.find(q);
      if (it == a.transitions.end()) continue;
      for (const auto& [label, dsts] : it->second) {
        if (label != kEpsilon && !dsts.empty()) labels.insert(label);
      }
    }
    for (const auto& e : labels) {
      std::set<StateId> next = a.epsilon_closure(a.step_set(subset, e));
      if (next.empty()) continue;
      StateId dst = subset_name(next);
      if (!dfa.states.count(dst)) {
        dfa.states.insert(dst);
        out.subset_of[dst] = next;
        work.push_back(dst);
      }
      dfa.add_transition(cur, e, dst);
    }
  }
  for (const auto& [q, subset] : out.subset_of) {
    for (const auto& s : subset) {
      if (a.marked.count(s)) {
        dfa.marked.insert(q);
        break;
      }
    }
  }
  return out;
}

Automaton determinize(const Automaton& a) { return determinize_with_subsets(a).dfa; }

Verdict compare_languages(const Automaton& a, const Automaton& b, CompareMode mode,
                          LanguageKind kind) {
  a.require_deterministic("comparison input '" + a.name + "'");
  b.require_deterministic("comparison input '" + b.name + "'");

  std::set<EventId> events = set_union(a.alphabet.events, b.alphabet.events);
  StateId sink_a;
  StateId sink_b;
  Automaton ca = complete_with_sink(a, events, &sink_a);
  Automaton cb = complete_with_sink(b, events, &sink_b);

  auto in_lang = [&](const Automaton& c, const StateId& sink, const StateId& q) {
    if (q == sink) return false;
    return kind == LanguageKind::Generated || c.marked.count(q) > 0;
  };
  auto fails = [&](const StateId& qa, const StateId& qb) {
    bool ma = in_lang(ca, sink_a, qa);
    bool mb = in_lang(cb, sink_b, qb);
    return mode == CompareMode::Equality ? ma != mb : (ma && !mb);
  };
  auto describe = [&](const StateId& qa, const StringSeq& s) {
    bool ma = in_lang(ca, sink_a, qa);
    std::string where = ma ? "in L(" + a.name + ") but not in L(" + b.name + ")"
                           : "in L(" + b.name + ") but not in L(" + a.name + ")";
    return "string '" + format_seq(s) + "' is " + where;
  };

  struct Node {
    StateId qa;
    StateId qb;
    std::size_t parent;
    EventId via;
  };
  std::vector<Node> nodes{{ca.initial, cb.initial, 0, ""}};
  std::map<std::pair<StateId, StateId>, std::size_t> seen{{{ca.initial, cb.initial}, 0}};
  auto access_string = [&](std::size_t i) {
    StringSeq s;
    while (i != 0) {
      s.push_back(nodes[i].via);
      i = nodes[i].parent;
    }
    std::reverse(s.begin(), s.end());
    return s;
  };

  if (fails(ca.initial, cb.initial)) {
    StringSeq w;
    return Verdict{false, w, std::nullopt, describe(ca.initial, w)};
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    StateId qa = nodes[i].qa;
    StateId qb = nodes[i].qb;
    for (const auto& e : events) {
      StateId na = *ca.step(qa, e);
      StateId nb = *cb.step(qb, e);
      if (seen.count({na, nb})) continue;
      seen[{na, nb}] = nodes.size();
      nodes.push_back({na, nb, i, e});
      if (fails(na, nb)) {
        StringSeq w = access_string(nodes.size() - 1);
        return Verdict{false, w, std::nullopt, describe(na, w)};
      }
    }
  }
  return Verdict{true, std::nullopt, std::nullopt,
                 mode == CompareMode::Equality ? "languages are equal" : "inclusion holds"};
}

std::vector<StringSeq> enumerate_language(const Automaton& a, std::size_t max_len,
                                          LanguageKind kind) {
  struct Item {
    std::set<StateId> states;
    StringSeq seq;
  };
  std::vector<StringSeq> out;
  auto record = [&](const Item& item) {
    if (kind == LanguageKind::Generated) {
      out.push_back(item.seq);
      return;
    }
    for (const auto& q : item.states) {
      if (a.marked.count(q)) {
        out.push_back(item.seq);
        return;
      }
    }
  };

  std::vector<Item> frontier{{a.epsilon_closure({a.initial}), {}}};
  record(frontier.front());
  for (std::size_t len = 1; len <= max_len && !frontier.empty(); ++len) {
    std::vector<Item> next_frontier;
    for (const auto& item : frontier) {
      std::set<EventId> labels;
      for (const auto& q : item.states) {
        auto it = a.transitions.find(q);
        if (it == a.transitions.end()) continue;
        for (const auto& [label, dsts] : it->second) {
          if (label != kEpsilon && !dsts.empty()) labels.insert(label);
        }
      }
      for (const auto& e : labels) {
        std::set<StateId> next = a.epsilon_closure(a.step_set(item.states, e));
        if (next.empty()) continue;
        Item child{std::move(next), item.seq};
        child.seq.push_back(e);
        record(child);
        next_frontier.push_back(std::move(child));
      }
    }
    frontier = std::move(next_frontier);
  }
  return out;
}

bool accepts(const Automaton& a, const StringSeq& s, LanguageKind kind) {
  for (const auto& e : s) {
    if (!a.alphabet.contains(e)) {
      throw Error("event '" + e + "' is not in the alphabet of '" + a.name + "'");
    }
  }
  std::set<StateId> cur = a.epsilon_closure({a.initial});
  for (const auto& e : s) {
    cur = a.epsilon_closure(a.step_set(cur, e));
    if (cur.empty()) return false;
  }
  if (kind == LanguageKind::Generated) return true;
  for (const auto& q : cur) {
    if (a.marked.count(q)) return true;
  }
  return false;
}

Automaton restrict_to_safe_states(const Automaton& g, const std::set<StateId>& safe) {
  for (const auto& q : safe) {
    if (!g.states.count(q)) throw Error("safe state '" + q + "' is not a state of '" + g.name + "'");
  }
  if (!safe.count(g.initial)) {
    throw Error("initial state '" + g.initial + "' of '" + g.name +
                "' is unsafe; the safe language would be empty");
  }
  Automaton h;
  h.name = g.name;
  h.alphabet = g.alphabet;
  h.initial = g.initial;
  h.states = safe;
  h.marked = [&] {
    std::set<StateId> m;
    for (const auto& q : g.marked) {
      if (safe.count(q)) m.insert(q);
    }
    return m;
  }();
  for (const auto& q : g.inserted) {
    if (safe.count(q)) h.inserted.insert(q);
  }
  for (const auto& [src, by_label] : g.transitions) {
    if (!safe.count(src)) continue;
    for (const auto& [label, dsts] : by_label) {
      for (const auto& dst : dsts) {
        if (safe.count(dst)) h.add_transition(src, label, dst);
      }
    }
  }
  return h;
}

Automaton complete_with_sink(const Automaton& a, const std::set<EventId>& events,
                             StateId* sink_out) {
  a.require_deterministic("completion input '" + a.name + "'");
  Automaton out = a;
  out.alphabet = Alphabet{};
  out.alphabet.events = events;
  StateId sink = fresh_state_name(out.states, "__sink");
  out.states.insert(sink);
  for (const auto& q : out.states) {
    for (const auto& e : events) {
      if (!out.successors(q, e)) out.add_transition(q, e, sink);
    }
  }
  if (sink_out) *sink_out = sink;
  return out;
}

SafeRefinement refine_with_spec(const Automaton& g, const Automaton& spec) {
  g.validate();
  spec.validate();
  g.require_deterministic("plant '" + g.name + "'");
  spec.require_deterministic("specification '" + spec.name + "'");

  StateId sink;
  Automaton cspec = complete_with_sink(spec, g.alphabet.events, &sink);

  SafeRefinement out;
  Automaton& p = out.plant;
  p.name = g.name;
  p.alphabet = g.alphabet;
  p.initial = pair_name(g.initial, cspec.initial);
  p.states.insert(p.initial);
  out.parts[p.initial] = {g.initial, cspec.initial};

  std::deque<StateId> work{p.initial};
  while (!work.empty()) {
    StateId cur = work.front();
    work.pop_front();
    auto [qg, qs] = out.parts.at(cur);
    auto it = g.transitions.find(qg);
    if (it == g.transitions.end()) continue;
    for (const auto& [e, dsts] : it->second) {
      StateId ng = *dsts.begin();
      StateId ns = *cspec.step(qs, e);
      StateId dst = pair_name(ng, ns);
      if (!p.states.count(dst)) {
        p.states.insert(dst);
        out.parts[dst] = {ng, ns};
        work.push_back(dst);
      }
      p.add_transition(cur, e, dst);
    }
  }
  for (const auto& [q, comp] : out.parts) {
    if (g.marked.count(comp.first)) p.marked.insert(q);
    if (comp.second != sink) out.safe.insert(q);
  }
  return out;
}

}  // namespace desa
