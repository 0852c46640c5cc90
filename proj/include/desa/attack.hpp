#pragma once

#include "desa/language_ops.hpp"

namespace desa {

/// One attacked plant transition.
struct TransitionKey {
  StateId src;
  EventId event;
  StateId dst;
  auto operator<=>(const TransitionKey&) const = default;
};

std::string to_string(const TransitionKey& tr);

/// Sensor attack model: a substitution language per attacked transition,
/// each marked by a deterministic attack automaton. The key set is exactly
/// the set of attacked transitions.
struct AttackSpec {
  std::string plant_name;
  std::map<TransitionKey, Automaton> entries;

  bool empty() const { return entries.empty(); }
  const Automaton* language_for(const TransitionKey& tr) const;

  /// Checks the spec against its host plant: keys must name existing
  /// transitions on sensor-attackable events, attack automata must be
  /// deterministic with alphabets inside the plant's and a nonempty marked
  /// language. An attack language that marks nothing would silently delete
  /// plant behaviour and is rejected as a modelling error.
  void validate(const Automaton& plant) const;

  /// Keys that are also transitions of the given sub-automaton.
  AttackSpec restricted_to(const Automaton& sub) const;
};

/// Interval of control patterns reachable by actuator tampering: a pattern
/// is attainable iff it lies between the two bounds.
struct PatternBounds {
  std::set<EventId> lower;  // issued pattern minus attackable events
  std::set<EventId> upper;  // issued pattern plus attackable events
  bool contains(const std::set<EventId>& pattern) const;
};

/// The attacked plant: every attacked transition is replaced by a fresh copy
/// of its attack automaton, glued in with silent moves. Original states are
/// marked; inserted copies are tagged. The marked language is exactly the
/// set of strings an attacker can turn the plant's strings into, and the
/// generated language is its prefix closure.
Automaton build_attacked_automaton(const Automaton& g, const AttackSpec& atk);

/// Replaces every transition labelled outside the observable set by a
/// silent move and restricts the alphabet accordingly. Applied to the
/// attacked plant this yields the automaton marking the attacked
/// observations of the plant language.
Automaton erase_unobservable(const Automaton& ga, const std::set<EventId>& observable);

/// Automaton marking exactly the substitution images of a single plant
/// string: the concatenation of the per-step languages along the unique run
/// (a singleton for unattacked steps, the attack language otherwise).
Automaton theta_automaton(const Automaton& g, const AttackSpec& atk, const StringSeq& s);

/// theta_automaton followed by projection onto the observable events.
Automaton phi_automaton(const Automaton& g, const AttackSpec& atk, const StringSeq& s);

PatternBounds actuator_pattern_bounds(const std::set<EventId>& gamma, const Alphabet& alphabet);

}  // namespace desa
