#pragma once

#include <cstdint>

#include "desa/coordination.hpp"

namespace desa {

/// One supervisor's closed loop: its (local) plant, the attack model on
/// that plant's transitions, and the supervisor itself.
struct LocalLoop {
  Automaton plant;
  AttackSpec attack;
  SupervisorRealization sup;
};

/// The exact upper bound of the languages the attacked closed loop can
/// generate. Built over the tracker: an event is kept iff the plant defines
/// it and it is uncontrollable, actuator-attackable, or enabled by the
/// pattern of some tracked observer state (off-domain observations
/// contribute the fallback pattern). The result is a prefix-closed DFA.
Automaton large_language(const Automaton& g, const SupervisorRealization& sup,
                         const AttackSpec& atk);

/// Direct recursive evaluation of the defining rules up to the given length,
/// enumerating the attacked observations of each string and testing the
/// existential witnesses one by one. Independent of the tracker; exact when
/// the attack languages are finite (acyclic attack automata).
std::vector<StringSeq> large_language_bounded(const Automaton& g, const SupervisorRealization& sup,
                                              const AttackSpec& atk, std::size_t depth);

/// Large language of two supervisors working in conjunction over the global
/// plant: a shared event needs both local enabling conditions, a private
/// event only its owner's; each observation witness is chosen independently
/// and afresh at every step.
Automaton conjunction_large_language(const Automaton& g, const LocalLoop& l1, const LocalLoop& l2);

struct TheoremReport {
  Verdict factorization;                  // conjunction == parallel of local large languages
  std::array<Verdict, 2> local_achieves;  // each local large language == projection of K
  Verdict global_achieves;                // conjunction == K
  bool all_hold() const {
    return factorization.holds && local_achieves[0].holds && local_achieves[1].holds &&
           global_achieves.holds;
  }
};

/// Language-equality checks for the three closed-loop guarantees of a
/// successful coordination synthesis, each with a counterexample on failure.
TheoremReport verify_theorems(const CoordinationOutcome& outcome);

enum class AttackerMode { Random, EnablingMaximal };

struct SimConfig {
  std::size_t runs = 1;
  std::size_t max_depth = 1;
  std::uint64_t seed = 0;
  AttackerMode attacker_mode = AttackerMode::Random;
  double damping = 0.5;  // stop probability at marked attack states
  bool keep_traces = false;
};

struct RunTrace {
  struct Step {
    EventId event;
    std::vector<StringSeq> observed;       // per supervisor, appended fragment
    std::vector<ControlPattern> issued;    // before actuator tampering
    std::vector<ControlPattern> applied;   // after actuator tampering
  };
  std::vector<Step> steps;
};

struct SimViolation {
  std::size_t run = 0;
  StringSeq executed;
  std::size_t first_unsafe = 0;  // 1-based position of the first unsafe prefix
};

struct SimReport {
  std::size_t runs_executed = 0;
  std::size_t max_depth = 0;
  AttackerMode attacker_mode = AttackerMode::Random;
  std::uint64_t seed = 0;
  std::vector<SimViolation> violations;
  std::size_t coverage = 0;  // distinct executed strings
  std::vector<RunTrace> traces;

  std::string to_text() const;
};

/// Seeded adversarial episodes against the closed loop. The random attacker
/// keeps a consistent observation history per run, samples attack strings by
/// damped random walks and tampers patterns inside their attainable
/// interval; the enabling-maximal attacker walks the conjunction tracker to
/// stress the upper bound. Every executed prefix is tested for membership
/// in K. Identical seeds give identical reports.
SimReport simulate_closed_loop(const Automaton& g, const std::vector<LocalLoop>& loops,
                               const Automaton& k, const SimConfig& cfg);

const char* to_string(AttackerMode mode);

}  // namespace desa
