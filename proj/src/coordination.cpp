#include "desa/coordination.hpp"

#include <deque>

namespace desa {

namespace {

Automaton epsilon_only_language() {
  Automaton a;
  a.name = "eps";
  a.initial = "e0";
  a.states = {"e0"};
  a.marked = {"e0"};
  return a;
}

StringSeq project_seq(const StringSeq& s, const std::set<EventId>& target) {
  StringSeq out;
  for (const auto& e : s) {
    if (target.count(e)) out.push_back(e);
  }
  return out;
}

bool assumption1_structural(const AttackSpec& global_atk, const ParallelComposition& g,
                            const Automaton& gi) {
  const auto& sigma_i = gi.alphabet.events;
  std::set<EventId> attacked_local;
  for (const auto& [tr, f] : global_atk.entries) {
    if (sigma_i.count(tr.event)) {
      attacked_local.insert(tr.event);
    } else {
      // foreign attacks must be invisible to this component
      Automaton pf = project(f, set_intersect(f.alphabet.events, sigma_i));
      if (!compare_languages(pf, epsilon_only_language(), CompareMode::Equality,
                             LanguageKind::Marked)
               .holds) {
        return false;
      }
    }
  }
  // locally visible attacked events must be attacked uniformly
  for (const auto& e : attacked_local) {
    const Automaton* reference = nullptr;
    for (const auto& [src, by_label] : g.product.transitions) {
      auto it = by_label.find(e);
      if (it == by_label.end()) continue;
      for (const auto& dst : it->second) {
        const Automaton* f = global_atk.language_for({src, e, dst});
        if (!f) return false;
        if (!reference) {
          reference = f;
        } else if (!compare_languages(*reference, *f, CompareMode::Equality, LanguageKind::Marked)
                        .holds) {
          return false;
        }
      }
    }
  }
  return true;
}

Verdict assumption1_bounded(const AttackSpec& global_atk, const ParallelComposition& g,
                            const Automaton& gi, const AttackSpec& local_atk,
                            unsigned check_depth) {
  const auto& sigma_i = gi.alphabet.events;
  std::set<EventId> sigma_io = set_intersect(g.product.alphabet.observable, sigma_i);
  for (const auto& s : enumerate_language(g.product, check_depth, LanguageKind::Generated)) {
    StringSeq local_s = project_seq(s, sigma_i);
    Automaton lhs = project(theta_automaton(gi, local_atk, local_s), sigma_io);
    Automaton rhs = project(theta_automaton(g.product, global_atk, s), sigma_io);
    Verdict eq = compare_languages(lhs, rhs, CompareMode::Equality, LanguageKind::Marked);
    if (!eq.holds) {
      return Verdict{false, s, std::nullopt,
                     "local and global observation maps differ after '" + format_seq(s) +
                         "': " + eq.detail};
    }
  }
  return Verdict{true, std::nullopt, std::nullopt,
                 "observation maps agree on all plant strings to depth " +
                     std::to_string(check_depth)};
}

}  // namespace

DecompositionReport check_conditional_decomposability(const Automaton& k,
                                                      const std::set<EventId>& s1,
                                                      const std::set<EventId>& s2) {
  std::set<EventId> covered = set_union(s1, s2);
  for (const auto& e : k.alphabet.events) {
    if (!covered.count(e)) {
      throw Error("specification event '" + e + "' is in neither local alphabet");
    }
  }
  Automaton p1 = project(k, set_intersect(s1, k.alphabet.events));
  Automaton p2 = project(k, set_intersect(s2, k.alphabet.events));
  p1.name = k.name + ".p1";
  p2.name = k.name + ".p2";
  Automaton both = compose_parallel(p1, p2);
  Verdict inc = compare_languages(both, k, CompareMode::Inclusion);

  DecompositionReport report;
  report.decomposable = inc.holds;
  report.counterexample = inc.witness;
  report.coordinator_used = set_intersect(s1, s2);
  return report;
}

std::set<EventId> extend_coordinator_alphabet(const Automaton& k, const std::set<EventId>& s1,
                                              const std::set<EventId>& s2,
                                              const std::set<EventId>& seed) {
  std::set<EventId> sk = set_union(seed, set_intersect(s1, s2));
  const std::set<EventId> all = set_union(s1, s2);
  for (;;) {
    DecompositionReport report =
        check_conditional_decomposability(k, set_union(s1, sk), set_union(s2, sk));
    if (report.decomposable) return sk;

    std::optional<EventId> pick;
    for (const auto& e : *report.counterexample) {
      if (!sk.count(e) && (!pick || e < *pick)) pick = e;
    }
    if (!pick) {
      // counterexample uses only coordinator events; widen from the rest
      for (const auto& e : all) {
        if (!sk.count(e)) {
          pick = e;
          break;
        }
      }
    }
    if (!pick) throw Error("coordinator extension exhausted the alphabet without decomposing");
    sk.insert(*pick);
  }
}

Automaton build_local_plant(const Automaton& gi, const Automaton& gj,
                            const std::set<EventId>& sk) {
  for (const auto& e : set_intersect(gi.alphabet.events, gj.alphabet.events)) {
    if (!sk.count(e)) {
      throw Error("shared event '" + e + "' is missing from the coordinator alphabet");
    }
  }
  Automaton pj = project(gj, set_intersect(sk, gj.alphabet.events));
  pj.name = "Pk(" + gj.name + ")";
  return compose_parallel(gi, pj);
}

Verdict check_observer_property(const Automaton& l, const std::set<EventId>& sk) {
  l.validate();
  l.require_deterministic("observer-property input '" + l.name + "'");
  std::set<EventId> skl = set_intersect(sk, l.alphabet.events);
  Automaton pdfa = project(l, skl);

  // per plant state: coordinator events reachable through non-coordinator moves
  std::map<StateId, std::set<EventId>> reach_enabled;
  for (const auto& q : l.states) {
    std::set<StateId> seen{q};
    std::deque<StateId> work{q};
    auto& enabled = reach_enabled[q];
    while (!work.empty()) {
      StateId cur = work.front();
      work.pop_front();
      auto it = l.transitions.find(cur);
      if (it == l.transitions.end()) continue;
      for (const auto& [e, dsts] : it->second) {
        if (skl.count(e)) {
          enabled.insert(e);
        } else {
          for (const auto& dst : dsts) {
            if (seen.insert(dst).second) work.push_back(dst);
          }
        }
      }
    }
  }

  std::string counts = " (states: " + std::to_string(l.states.size()) + " in " + l.name + ", " +
                       std::to_string(pdfa.states.size()) + " projected)";
  struct Node {
    StateId q;
    StateId x;
    std::size_t parent;
    EventId via;
  };
  std::vector<Node> nodes{{l.initial, pdfa.initial, 0, ""}};
  std::set<std::pair<StateId, StateId>> seen{{l.initial, pdfa.initial}};
  auto access_string = [&](std::size_t i) {
    StringSeq s;
    while (i != 0) {
      s.push_back(nodes[i].via);
      i = nodes[i].parent;
    }
    std::reverse(s.begin(), s.end());
    return s;
  };

  for (std::size_t i = 0; i < nodes.size(); ++i) {
    auto [q, x, parent, via] = nodes[i];
    for (const auto& e : skl) {
      if (!pdfa.step(x, e)) continue;
      if (!reach_enabled.at(q).count(e)) {
        StringSeq s = access_string(i);
        return Verdict{false, s, e,
                       "after '" + format_seq(s) + "' the projection allows '" + e +
                           "' but the plant cannot silently reach it" + counts};
      }
    }
    auto it = l.transitions.find(q);
    if (it == l.transitions.end()) continue;
    for (const auto& [e, dsts] : it->second) {
      StateId qn = *dsts.begin();
      StateId xn = skl.count(e) ? *pdfa.step(x, e) : x;
      if (seen.insert({qn, xn}).second) nodes.push_back({qn, xn, i, e});
    }
  }
  return Verdict{true, std::nullopt, std::nullopt, "observer property holds" + counts};
}

AttackSpec lift_attack(const AttackSpec& component_atk, const Automaton& product,
                       const std::map<StateId, std::pair<StateId, StateId>>& parts, int side) {
  AttackSpec out;
  out.plant_name = product.name;
  if (component_atk.empty()) return out;
  for (const auto& [src, by_label] : product.transitions) {
    for (const auto& [e, dsts] : by_label) {
      for (const auto& dst : dsts) {
        const auto& ps = parts.at(src);
        const auto& pd = parts.at(dst);
        TransitionKey component{side == 0 ? ps.first : ps.second, e,
                                side == 0 ? pd.first : pd.second};
        if (const Automaton* f = component_atk.language_for(component)) {
          out.entries.emplace(TransitionKey{src, e, dst}, *f);
        }
      }
    }
  }
  return out;
}

LocalAttackDerivation derive_local_attack(const AttackSpec& global_atk,
                                          const ParallelComposition& g, int side,
                                          const Automaton& gi, unsigned check_depth) {
  global_atk.validate(g.product);
  LocalAttackDerivation out;
  out.attack.plant_name = gi.name;
  const auto& sigma_i = gi.alphabet.events;
  for (const auto& [tr, f] : global_atk.entries) {
    if (!sigma_i.count(tr.event)) continue;
    const auto& ps = g.parts.at(tr.src);
    const auto& pd = g.parts.at(tr.dst);
    TransitionKey local{side == 0 ? ps.first : ps.second, tr.event,
                        side == 0 ? pd.first : pd.second};
    if (!gi.has_transition(local.src, local.event, local.dst)) {
      throw Error("attacked event '" + tr.event + "' has no matching transition " +
                  to_string(local) + " in '" + gi.name + "'");
    }
    Automaton pf = project(f, set_intersect(f.alphabet.events, sigma_i));
    pf.name = f.name;
    auto it = out.attack.entries.find(local);
    if (it == out.attack.entries.end()) {
      out.attack.entries.emplace(local, std::move(pf));
    } else {
      Verdict eq = compare_languages(it->second, pf, CompareMode::Equality, LanguageKind::Marked);
      if (!eq.holds) {
        throw Error("conflicting local attack languages for transition " + to_string(local) +
                    " of '" + gi.name + "': " + eq.detail);
      }
    }
  }
  out.attack.validate(gi);
  out.exact = assumption1_structural(global_atk, g, gi);
  out.consistency = assumption1_bounded(global_atk, g, gi, out.attack, check_depth);
  return out;
}

CoordinationOutcome coordination_synthesize(const CoordinationProblem& p) {
  p.g1.validate();
  p.g2.validate();
  p.spec.validate();

  CoordinationOutcome out;
  ParallelComposition comp = compose_parallel_tracked(p.g1, p.g2);
  out.global_plant = comp.product;
  out.global_parts = comp.parts;

  SafeRefinement kref = refine_with_spec(comp.product, p.spec);
  out.k = restrict_to_safe_states(kref.plant, kref.safe);
  out.k.name = "K";

  const std::set<EventId>& s1 = p.g1.alphabet.events;
  const std::set<EventId>& s2 = p.g2.alphabet.events;
  std::set<EventId> seed = set_union(p.coordinator, set_intersect(s1, s2));
  out.coordinator =
      p.extend ? extend_coordinator_alphabet(out.k, s1, s2, seed) : seed;
  out.decomposition = check_conditional_decomposability(out.k, set_union(s1, out.coordinator),
                                                        set_union(s2, out.coordinator));
  out.decomposition.coordinator_used = out.coordinator;
  if (!out.decomposition.decomposable) {
    out.notes.push_back("specification is not conditionally decomposable; counterexample '" +
                        format_seq(*out.decomposition.counterexample) + "'");
    return out;
  }

  bool all_hold = true;
  for (int side = 0; side < 2; ++side) {
    const Automaton& gi = side == 0 ? p.g1 : p.g2;
    const Automaton& gj = side == 0 ? p.g2 : p.g1;
    LocalSynthesis& local = out.local[side];
    const std::string tag = std::to_string(side + 1);

    std::set<EventId> sigma_ext = set_union(gi.alphabet.events, out.coordinator);
    ParallelComposition gt = [&] {
      Automaton pj = project(gj, set_intersect(out.coordinator, gj.alphabet.events));
      pj.name = "Pk(" + gj.name + ")";
      return compose_parallel_tracked(gi, pj);
    }();

    Automaton pik = project(out.k, set_intersect(sigma_ext, out.k.alphabet.events));
    pik.name = "P" + tag + "(K)";
    SafeRefinement ref = refine_with_spec(gt.product, pik);
    local.plant = ref.plant;
    local.plant.name = "LocalPlant" + tag;
    local.safe = ref.safe;
    local.safe_automaton = restrict_to_safe_states(local.plant, local.safe);
    local.safe_automaton.name = "SafePart" + tag;
    local.alphabet = local.plant.alphabet;

    // Attack model for this supervisor's channel, re-keyed onto the refined
    // plant through both product constructions.
    AttackSpec on_gi;
    on_gi.plant_name = gi.name;
    if (p.global_attack) {
      LocalAttackDerivation der =
          derive_local_attack(*p.global_attack, comp, side, gi, p.assumption_depth);
      on_gi = der.attack;
      local.assumption1 = der.consistency;
      local.assumption1_exact = der.exact;
    } else {
      const auto& given = side == 0 ? p.local_attack1 : p.local_attack2;
      if (given) {
        given->validate(gi);
        on_gi = *given;
      }
      local.assumption1 = Verdict{true, std::nullopt, std::nullopt,
                                  "holds by construction: attacks are specified per component"};
      local.assumption1_exact = true;
    }
    AttackSpec on_gt = lift_attack(on_gi, gt.product, gt.parts, 0);
    local.attack = lift_attack(on_gt, local.plant, ref.parts, 0);
    local.attack.plant_name = local.plant.name;

    local.controllability = check_ca_controllability(local.plant, local.safe_automaton,
                                                     local.alphabet);
    local.observability =
        check_ca_observability(local.plant, local.safe_automaton, local.attack, local.alphabet);
    local.observer_property =
        check_observer_property(gj, set_intersect(out.coordinator, gj.alphabet.events));
    if (!local.observer_property.holds) {
      out.notes.push_back("observer property fails for component " + std::to_string(2 - side) +
                          " (advisory): " + local.observer_property.detail);
    }

    bool ok = local.controllability.holds && local.observability.holds;
    all_hold = all_hold && ok;
    if (ok || p.force) {
      SupervisorRealization sup = synthesize_ca_supervisor(
          local.plant, local.safe_automaton, local.attack, local.alphabet, true);
      sup.name = "Supervisor" + tag;
      sup.plant_name = local.plant.name;
      local.supervisor = std::move(sup);
    } else {
      Verdict& failed = local.controllability.holds ? local.observability : local.controllability;
      out.notes.push_back("component " + tag + ": " + failed.detail);
    }
  }
  out.success = all_hold;
  return out;
}

}  // namespace desa
