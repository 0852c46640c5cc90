#pragma once

#include <map>
#include <tuple>

#include "desa/types.hpp"

namespace desa {

/// A finite automaton value. May be nondeterministic and may contain silent
/// (kEpsilon) transitions. The generated language is prefix-closed by
/// construction; marking is tracked separately. All operations on automata
/// are pure: values are never mutated after construction.
struct Automaton {
  std::string name;
  Alphabet alphabet;
  std::set<StateId> states;
  StateId initial;
  std::set<StateId> marked;
  std::set<StateId> inserted;  // states added by attack expansion
  std::map<StateId, std::map<EventId, std::set<StateId>>> transitions;

  void add_state(const StateId& q, bool mark = true);
  void add_transition(const StateId& src, const EventId& label, const StateId& dst);
  bool has_transition(const StateId& src, const EventId& label, const StateId& dst) const;
  const std::set<StateId>* successors(const StateId& src, const EventId& label) const;

  /// Single deterministic step; nullopt when undefined.
  std::optional<StateId> step(const StateId& src, const EventId& event) const;
  /// Deterministic run from the initial state.
  std::optional<StateId> run(const StringSeq& s) const;

  bool is_deterministic() const;
  bool has_epsilon() const;
  std::size_t transition_count() const;

  /// States reachable through silent moves (reflexive-transitive closure).
  std::set<StateId> epsilon_closure(const std::set<StateId>& from) const;
  /// One-step successors of a state set under an event, without closure.
  std::set<StateId> step_set(const std::set<StateId>& from, const EventId& event) const;

  void validate() const;
  void require_deterministic(const std::string& role) const;

  bool operator==(const Automaton&) const = default;
};

/// Builds an automaton from a transition list; states are inferred from the
/// endpoints. All states are marked unless a marked set is given.
Automaton make_automaton(std::string name, Alphabet alphabet, StateId initial,
                         const std::vector<std::tuple<StateId, EventId, StateId>>& transitions,
                         std::optional<std::set<StateId>> marked = std::nullopt);

/// True when sub's states and transitions are contained in g's and the
/// initial states agree.
bool is_subautomaton(const Automaton& sub, const Automaton& g);

}  // namespace desa
