#pragma once

#include "desa/attack.hpp"

namespace desa {

/// Determinised attacked-observation automaton. States are canonical subsets
/// of the attacked safe sub-automaton; each carries the set of safe plant
/// states it contains, which is the state estimate for the observations
/// reaching it.
struct ObserverAutomaton {
  Automaton dfa;                                   // deterministic, over observable events
  std::map<StateId, std::set<StateId>> subset_of;  // observer state -> attacked-automaton states
  std::set<StateId> safe_states;                   // states of the safe sub-automaton

  std::set<StateId> estimate_of(const StateId& x) const;
  bool operator==(const ObserverAutomaton&) const = default;
};

/// Estimate query result. Observations outside the observer's marked domain
/// are reported as off-domain rather than as an error: the supervisor is
/// defined there too (it falls back to the uncontrollable events).
struct StateEstimate {
  bool off_domain = false;
  std::set<StateId> states;
};

using ControlPattern = std::set<EventId>;

/// Observer plus one control pattern per marked observer state, realising a
/// state-estimate-based supervisor. Off-domain observations get the fixed
/// fallback pattern.
struct SupervisorRealization {
  std::string name;
  std::string plant_name;
  ObserverAutomaton observer;
  std::map<StateId, ControlPattern> pattern_of;  // keyed by marked observer states
  ControlPattern off_domain_pattern;             // uncontrollable local events
  Alphabet local_alphabet;

  bool operator==(const SupervisorRealization&) const = default;
};

/// Deterministic product of a plant with sets of observer states: the node
/// reached by a plant string holds every observer state some attacked
/// observation of that string leads to. Observations that fall off the
/// observer domain are folded into a single off-domain flag.
struct Tracker {
  struct Node {
    StateId plant_state;
    std::set<StateId> observer_states;
    bool off_domain = false;
  };
  std::vector<Node> nodes;
  std::map<std::pair<std::size_t, EventId>, std::size_t> next;
  std::size_t initial = 0;

  std::optional<std::size_t> drive(const StringSeq& s) const;
};

/// Shortest access string per tracker node, in construction (BFS) order.
std::vector<StringSeq> tracker_access_strings(const Tracker& t);

/// Steps sets of observer states along plant transitions: an attacked
/// transition fans out through every complete string of its projected attack
/// language, an observable one takes a single observer step, an unobservable
/// one leaves the set unchanged. Observations with no observer run collapse
/// into the off-domain flag, which is absorbing.
class ObservationTracker {
public:
  ObservationTracker(const ObserverAutomaton& obs, const AttackSpec& atk);
  void step(const TransitionKey& tr, std::set<StateId>& w, bool& off) const;

private:
  const ObserverAutomaton* obs_;
  std::set<EventId> observable_;
  std::map<TransitionKey, Automaton> projected_;
};

/// Tracker over an arbitrary plant whose attack spec is keyed on that
/// plant's transitions; the observer may come from a different (typically
/// safe sub-) automaton.
Tracker build_tracker_over(const Automaton& plant, const AttackSpec& atk,
                           const ObserverAutomaton& obs);

/// Attack expansion, observation erasure and determinisation in one step,
/// keeping the plant-state payloads. The observer's marked language is the
/// set of attacked observations of the safe language.
ObserverAutomaton build_ca_observer(const Automaton& h, const AttackSpec& atk,
                                    const std::set<EventId>& observable);

StateEstimate state_estimate(const ObserverAutomaton& obs, const StringSeq& w);

/// Events that must be disabled for an estimate: those defined at some
/// estimated state and landing outside the safe set.
std::set<EventId> rho_disable(const std::set<StateId>& estimate, const Automaton& g,
                              const std::set<StateId>& safe);

/// Controllability with the uncontrollable events enlarged by the
/// actuator-attackable ones. Fails with the shortest (string, event) witness.
Verdict check_ca_controllability(const Automaton& g, const Automaton& h, const Alphabet& alphabet);

/// Tracker over g's transition structure; the attack spec must be keyed on
/// g's transitions and the observer must have been built from h.
Tracker build_tracker(const Automaton& g, const Automaton& h, const ObserverAutomaton& obs,
                      const AttackSpec& atk);

/// Observability under attacked observations: every safe continuation must
/// be justified by at least one attacked observation whose estimate does not
/// force the event to be disabled.
Verdict check_ca_observability(const Automaton& g, const Automaton& h, const AttackSpec& atk,
                               const Alphabet& alphabet);

/// State-estimate supervisor: enabled events are the local events not
/// disabled at the estimate, plus the uncontrollable ones. Both conditions
/// above are enforced unless force is set.
SupervisorRealization synthesize_ca_supervisor(const Automaton& g, const Automaton& h,
                                               const AttackSpec& atk, const Alphabet& alphabet,
                                               bool force = false);

ControlPattern control_pattern(const SupervisorRealization& sup, const StringSeq& w);

}  // namespace desa
