#pragma once

#include "desa/automaton.hpp"

namespace desa {

enum class CompareMode { Equality, Inclusion };
enum class LanguageKind { Generated, Marked };

/// Synchronous product with per-state provenance: each product state maps
/// back to its component states.
struct ParallelComposition {
  Automaton product;
  std::map<StateId, std::pair<StateId, StateId>> parts;
};

/// Synchronous product of two deterministic automata over the union
/// alphabet. Shared events synchronise, private events interleave; only the
/// accessible part is kept. Attribute flags of shared events must agree.
ParallelComposition compose_parallel_tracked(const Automaton& a, const Automaton& b);
Automaton compose_parallel(const Automaton& a, const Automaton& b);

/// Natural projection onto the target events: non-target transitions become
/// silent and the result is determinised.
Automaton project(const Automaton& a, const std::set<EventId>& target);

struct DeterminizeResult {
  Automaton dfa;
  std::map<StateId, std::set<StateId>> subset_of;  // dfa state -> source states
};

/// Subset construction seeded and stepped through the unobservable reach.
/// Subset states are canonicalised as sorted lists of constituent ids.
/// Generated and marked languages are preserved; a subset is marked iff it
/// contains a marked source state.
DeterminizeResult determinize_with_subsets(const Automaton& a);
Automaton determinize(const Automaton& a);

/// Language equality/inclusion over the union alphabet, via the product of
/// sink-completed copies. On failure the witness is the shortest
/// distinguishing string (length-lexicographic tie-break).
Verdict compare_languages(const Automaton& a, const Automaton& b, CompareMode mode,
                          LanguageKind kind = LanguageKind::Generated);

/// Exactly the strings of length <= max_len in the chosen language, in
/// length-lexicographic order.
std::vector<StringSeq> enumerate_language(const Automaton& a, std::size_t max_len,
                                          LanguageKind kind = LanguageKind::Generated);

bool accepts(const Automaton& a, const StringSeq& s, LanguageKind kind = LanguageKind::Generated);

/// Sub-automaton on the given safe states; transitions must start and land
/// inside the safe set. The initial state must be safe (otherwise the safe
/// language would be empty).
Automaton restrict_to_safe_states(const Automaton& g, const std::set<StateId>& safe);

/// Totalised copy over the given events, with a fresh non-accepting sink.
Automaton complete_with_sink(const Automaton& a, const std::set<EventId>& events,
                             StateId* sink_out = nullptr);

/// Product of a plant with a (sink-completed) specification automaton. The
/// refined plant generates exactly L(g); its safe states are those whose
/// specification component is still alive, so restricting to them yields
/// the sub-automaton generating L(g) ∩ L(spec).
struct SafeRefinement {
  Automaton plant;
  std::set<StateId> safe;
  std::map<StateId, std::pair<StateId, StateId>> parts;  // refined -> (plant state, spec state)
};
SafeRefinement refine_with_spec(const Automaton& g, const Automaton& spec);

/// Canonical name for a subset state.
std::string subset_name(const std::set<StateId>& subset);

}  // namespace desa
