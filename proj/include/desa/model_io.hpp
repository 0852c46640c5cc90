#pragma once

#include <variant>

#include "desa/verify.hpp"

namespace desa {

/// Ordered blocks of a model file. Attack, observer and supervisor blocks
/// may reference automaton/observer blocks that appear earlier in the same
/// file; dangling references are parse errors.
struct ModelFile {
  using Block = std::variant<Automaton, AttackSpec, ObserverAutomaton, SupervisorRealization>;
  std::vector<Block> blocks;

  const Automaton* find_automaton(const std::string& name) const;
  const Automaton* first_automaton() const;
  const ObserverAutomaton* find_observer(const std::string& name) const;
  const ObserverAutomaton* first_observer() const;
  const SupervisorRealization* first_supervisor() const;
  std::vector<const SupervisorRealization*> supervisors() const;

  /// Union of all attack blocks naming the given plant, validated against it.
  AttackSpec merged_attack_on(const Automaton& plant) const;
};

/// Parses the line-oriented model format. All block invariants are checked
/// here; errors carry a 1-based line and column.
ModelFile parse_model(const std::string& text);

/// Canonical serialisation: blocks in order, states and transitions sorted,
/// attribute flags written explicitly. parse(serialize(parse(text))) equals
/// parse(text), and value-equal blocks serialise identically.
std::string serialize_model(const ModelFile& file);

/// Appends the attack's distinct language automata (deduplicated by value,
/// renamed on name clashes) followed by the attack block itself.
void append_attack_blocks(ModelFile& out, const AttackSpec& atk);

/// Everything needed to re-run verification or simulation against a
/// completed coordination synthesis.
struct CoordinationBundle {
  Automaton g1;
  Automaton g2;
  Automaton k;
  std::array<LocalLoop, 2> loops;
};

ModelFile coordination_to_model(const Automaton& g1, const Automaton& g2,
                                const CoordinationOutcome& outcome);
CoordinationBundle coordination_from_model(const ModelFile& file);

/// Rebuilds the outcome fields that verification needs from a bundle.
CoordinationOutcome outcome_from_bundle(const CoordinationBundle& bundle);

}  // namespace desa
