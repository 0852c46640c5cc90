#pragma once

#include <array>

#include "desa/estimation.hpp"

namespace desa {

struct DecompositionReport {
  bool decomposable = false;
  std::optional<StringSeq> counterexample;  // in P1(K) || P2(K) but outside K
  std::set<EventId> coordinator_used;
};

/// Does K equal the synchronous product of its projections onto the two
/// local alphabets? Since K is always included in that product, a failure
/// yields a counterexample from the product outside K.
DecompositionReport check_conditional_decomposability(const Automaton& k,
                                                      const std::set<EventId>& s1,
                                                      const std::set<EventId>& s2);

/// Greedy counterexample-driven enlargement of the coordinator alphabet
/// until K becomes conditionally decomposable. Terminates because the full
/// alphabet always succeeds (projections become identities).
std::set<EventId> extend_coordinator_alphabet(const Automaton& k, const std::set<EventId>& s1,
                                              const std::set<EventId>& s2,
                                              const std::set<EventId>& seed = {});

/// Local plant extended by the coordinator part of the other component:
/// gi composed with the projection of gj onto the coordinator events.
Automaton build_local_plant(const Automaton& gi, const Automaton& gj,
                            const std::set<EventId>& sk);

/// Observer property of the projection onto sk with respect to L(l): every
/// coordinator event possible after the projected string must be reachable
/// from the current state through non-coordinator events. An efficiency
/// condition, reported with the observed state counts.
Verdict check_observer_property(const Automaton& l, const std::set<EventId>& sk);

/// Re-keys a component-level attack spec onto a product automaton built
/// from that component: every product transition whose component part is
/// attacked inherits the attack language.
AttackSpec lift_attack(const AttackSpec& component_atk, const Automaton& product,
                       const std::map<StateId, std::pair<StateId, StateId>>& parts, int side);

struct LocalAttackDerivation {
  AttackSpec attack;   // keyed on the component plant
  bool exact = false;  // structural consistency between global and local models
  Verdict consistency; // bounded identity check of the two observation maps
};

/// Projects a global attack spec onto one component: each attacked global
/// transition maps to its component transition, with the attack language
/// projected onto the component alphabet. Conflicting projections for the
/// same component transition are rejected. The consistency of the derived
/// local observation map with the global one is checked structurally and,
/// failing that, to a bounded depth.
LocalAttackDerivation derive_local_attack(const AttackSpec& global_atk,
                                          const ParallelComposition& g, int side,
                                          const Automaton& gi, unsigned check_depth = 4);

struct CoordinationProblem {
  Automaton g1;
  Automaton g2;
  Automaton spec;                 // K; intersected with L(G1||G2) internally
  std::set<EventId> coordinator;  // seed for the coordinator alphabet
  bool extend = true;             // enlarge the coordinator when K does not decompose
  std::optional<AttackSpec> global_attack;  // keyed on G1||G2
  std::optional<AttackSpec> local_attack1;  // keyed on G1
  std::optional<AttackSpec> local_attack2;  // keyed on G2
  unsigned assumption_depth = 4;
  bool force = false;  // synthesize even when a condition fails
};

struct LocalSynthesis {
  Automaton plant;           // refined local plant over the extended alphabet
  std::set<StateId> safe;
  Automaton safe_automaton;  // generates the projection of K
  AttackSpec attack;         // keyed on plant
  Alphabet alphabet;
  Verdict controllability;
  Verdict observability;
  Verdict observer_property;  // advisory
  Verdict assumption1;
  bool assumption1_exact = true;
  std::optional<SupervisorRealization> supervisor;
};

struct CoordinationOutcome {
  bool success = false;
  std::set<EventId> coordinator;
  DecompositionReport decomposition;
  Automaton global_plant;  // G1 || G2
  std::map<StateId, std::pair<StateId, StateId>> global_parts;
  Automaton k;             // K ∩ L(G1||G2)
  std::array<LocalSynthesis, 2> local;
  std::vector<std::string> notes;
};

/// End-to-end coordination synthesis: coordinator extension and
/// decomposability, local plants, safe parts for the projected
/// specification, local attack derivation, CA-controllability and
/// CA-observability per component, and the two state-estimate supervisors.
/// All verdicts are reported; supervisors are only emitted when every
/// condition holds (or force is set).
CoordinationOutcome coordination_synthesize(const CoordinationProblem& p);

}  // namespace desa
