#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <thread>

#include "support.hpp"

using namespace desa;
using fx::lang_gen;
using fx::lang_marked;
using fx::seq;
using fx::to_set;

namespace {

Automaton single_event(const std::string& name, const EventId& e) {
  return make_automaton(name, fx::alphabet({e}), "s0", {{"s0", e, "s1"}});
}

// brute-force synchronous product: intersect the inverse projections
std::set<StringSeq> shuffle_oracle(const Automaton& a, const Automaton& b, std::size_t max_len) {
  std::set<EventId> all = set_union(a.alphabet.events, b.alphabet.events);
  std::set<StringSeq> out;
  std::vector<StringSeq> frontier{{}};
  for (std::size_t len = 0; len <= max_len; ++len) {
    std::vector<StringSeq> next;
    for (const auto& s : frontier) {
      if (accepts(a, oracle::project_string(s, a.alphabet.events)) &&
          accepts(b, oracle::project_string(s, b.alphabet.events))) {
        out.insert(s);
      }
      if (s.size() == max_len) continue;
      for (const auto& e : all) {
        StringSeq se = s;
        se.push_back(e);
        next.push_back(std::move(se));
      }
    }
    frontier = std::move(next);
  }
  return out;
}

}  // namespace

TEST_CASE("parallel composition of disjoint alphabets is the shuffle") {
  Automaton a = single_event("A", "a");
  Automaton b = single_event("B", "b");
  Automaton c = compose_parallel(a, b);
  CHECK(lang_gen(c, 3) ==
        std::set<StringSeq>{seq({}), seq({"a"}), seq({"b"}), seq({"a", "b"}), seq({"b", "a"})});
}

TEST_CASE("parallel composition is idempotent on identical alphabets") {
  Automaton g = fx::fix_lin();
  Automaton c = compose_parallel(g, g);
  CHECK(compare_languages(c, g, CompareMode::Equality).holds);
}

TEST_CASE("coordination fixture composes to the closure of acb") {
  Automaton c = compose_parallel(fx::fix_coord_g1(), fx::fix_coord_g2());
  CHECK(lang_gen(c, 3) == shuffle_oracle(fx::fix_coord_g1(), fx::fix_coord_g2(), 3));
  CHECK(lang_gen(c, 3) ==
        std::set<StringSeq>{seq({}), seq({"a"}), seq({"a", "c"}), seq({"a", "c", "b"})});
}

TEST_CASE("composition rejects conflicting attribute flags") {
  Automaton a = make_automaton("A", fx::alphabet({"a"}, {}, {"a"}), "s0", {{"s0", "a", "s1"}});
  Automaton b = single_event("B", "a");  // a controllable here
  CHECK_THROWS_WITH_AS(compose_parallel(a, b),
                       doctest::Contains("conflicting controllability attribute for shared event"),
                       Error);
}

TEST_CASE("projection erases events and determinises") {
  Automaton g = fx::fix_lin();
  CHECK(lang_gen(project(g, {"a"}), 4) == std::set<StringSeq>{seq({}), seq({"a"})});
  CHECK(lang_gen(project(g, {}), 4) == std::set<StringSeq>{seq({})});
  CHECK(compare_languages(project(g, {"a", "b"}), g, CompareMode::Equality).holds);
}

TEST_CASE("determinize of a deterministic automaton is its accessible part") {
  Automaton g = fx::fix_lin();
  Automaton d = determinize(g);
  CHECK(d.is_deterministic());
  CHECK(compare_languages(d, g, CompareMode::Equality).holds);
  CHECK(lang_marked(d, 4) == lang_marked(g, 4));
}

TEST_CASE("unobservable reach seeds the subset construction") {
  Automaton a;
  a.name = "EPS";
  a.alphabet = fx::alphabet({"a"});
  a.initial = "q0";
  a.states = {"q0", "q1", "q2"};
  a.marked = a.states;
  a.add_transition("q0", kEpsilon, "q1");
  a.add_transition("q1", "a", "q2");
  DeterminizeResult det = determinize_with_subsets(a);
  CHECK(det.subset_of.at(det.dfa.initial) == std::set<StateId>{"q0", "q1"});
  CHECK(det.dfa.transition_count() == 1);
  CHECK(det.subset_of.at(*det.dfa.step(det.dfa.initial, "a")) == std::set<StateId>{"q2"});
}

TEST_CASE("language comparison finds shortest witnesses") {
  Automaton closure_ab = fx::fix_lin();
  Automaton shuffle = compose_parallel(single_event("A", "a"), single_event("B", "b"));

  CHECK(compare_languages(closure_ab, closure_ab, CompareMode::Equality).holds);

  Verdict v = compare_languages(closure_ab, shuffle, CompareMode::Equality);
  CHECK_FALSE(v.holds);
  CHECK(*v.witness == seq({"b"}));  // shortest string in the shuffle only

  CHECK(compare_languages(closure_ab, shuffle, CompareMode::Inclusion).holds);
  CHECK_FALSE(compare_languages(shuffle, closure_ab, CompareMode::Inclusion).holds);
}

TEST_CASE("enumeration is exact and length-lexicographic") {
  Automaton g = fx::fix_lin();
  CHECK(enumerate_language(g, 1) == std::vector<StringSeq>{seq({}), seq({"a"})});
  CHECK(enumerate_language(g, 5) == std::vector<StringSeq>{seq({}), seq({"a"}), seq({"a", "b"})});

  Automaton eps_only;
  eps_only.name = "EPSLANG";
  eps_only.alphabet = fx::alphabet({"a"});
  eps_only.initial = "f0";
  eps_only.states = {"f0"};
  eps_only.marked = {"f0"};
  CHECK(enumerate_language(eps_only, 3, LanguageKind::Marked) == std::vector<StringSeq>{seq({})});
}

TEST_CASE("membership respects the safe restriction") {
  CHECK(accepts(fx::fix_lin(), seq({"a", "b"})));
  CHECK_FALSE(accepts(fx::fix_lin(), seq({"b", "a"})));
  CHECK_FALSE(accepts(fx::fix_safe(), seq({"a", "b"})));
  CHECK_THROWS_WITH_AS(accepts(fx::fix_lin(), seq({"z"})), doctest::Contains("event 'z'"), Error);
}

TEST_CASE("safe-state restriction") {
  Automaton g = fx::fix_lin();
  Automaton h = restrict_to_safe_states(g, {"q0", "q1"});
  CHECK(lang_gen(h, 5) == std::set<StringSeq>{seq({}), seq({"a"})});
  CHECK(compare_languages(restrict_to_safe_states(g, g.states), g, CompareMode::Equality).holds);

  Automaton conf = restrict_to_safe_states(fx::fix_conf(), fx::fix_conf_safe());
  CHECK(lang_gen(conf, 5) ==
        std::set<StringSeq>{seq({}), seq({"a"}), seq({"b"}), seq({"a", "c"})});

  CHECK_THROWS_WITH_AS(restrict_to_safe_states(g, {"q1"}), doctest::Contains("unsafe"), Error);
}

TEST_CASE("composition is commutative and associative up to language equality") {
  std::mt19937_64 rng(2024);
  Alphabet shared = fx::alphabet({"a", "b", "c"});
  for (int round = 0; round < 25; ++round) {
    Automaton a = gen::random_plant(rng, 5, 3, &shared);
    Automaton b = gen::random_plant(rng, 5, 3, &shared);
    Automaton c = gen::random_plant(rng, 5, 3, &shared);
    a.name = "Ra";
    b.name = "Rb";
    c.name = "Rc";
    Automaton ab = compose_parallel(a, b);
    Automaton ba = compose_parallel(b, a);
    CHECK(compare_languages(ab, ba, CompareMode::Equality).holds);
    Automaton ab_c = compose_parallel(ab, c);
    Automaton a_bc = compose_parallel(a, compose_parallel(b, c));
    CHECK(compare_languages(ab_c, a_bc, CompareMode::Equality).holds);
  }
}

TEST_CASE("projection is idempotent and preserves prefix-closedness") {
  std::mt19937_64 rng(77);
  for (int round = 0; round < 30; ++round) {
    Automaton a = gen::random_plant(rng, 6, 4);
    std::set<EventId> target;
    for (const auto& e : a.alphabet.events) {
      if (rng() % 2) target.insert(e);
    }
    Automaton once = project(a, target);
    Automaton twice = project(once, target);
    CHECK(compare_languages(once, twice, CompareMode::Equality).holds);

    std::set<StringSeq> lang = lang_gen(once, 5);
    for (const auto& s : lang) {
      if (s.empty()) continue;
      StringSeq prefix(s.begin(), s.end() - 1);
      CHECK(lang.count(prefix));
    }
  }
}

TEST_CASE("determinize preserves generated and marked languages") {
  std::mt19937_64 rng(4242);
  for (int round = 0; round < 30; ++round) {
    Automaton a = gen::random_plant(rng, 6, 3);
    // sprinkle nondeterminism and silent moves
    std::vector<StateId> states(a.states.begin(), a.states.end());
    for (int extra = 0; extra < 3; ++extra) {
      StateId src = states[rng() % states.size()];
      StateId dst = states[rng() % states.size()];
      if (rng() % 2) {
        a.add_transition(src, kEpsilon, dst);
      } else {
        a.add_transition(src, *a.alphabet.events.begin(), dst);
      }
    }
    if (rng() % 2) a.marked = {states[rng() % states.size()]};
    Automaton d = determinize(a);
    CHECK(d.is_deterministic());
    CHECK(lang_gen(a, 8) == lang_gen(d, 8));
    CHECK(lang_marked(a, 8) == lang_marked(d, 8));
  }
}

TEST_CASE("equality holds exactly when inclusion holds both ways") {
  std::mt19937_64 rng(99);
  for (int round = 0; round < 40; ++round) {
    Automaton a = gen::random_plant(rng, 5, 2);
    Automaton b = gen::random_plant(rng, 5, 2);
    a.name = "Ra";
    b.name = "Rb";
    bool eq = compare_languages(a, b, CompareMode::Equality).holds;
    bool incl_ab = compare_languages(a, b, CompareMode::Inclusion).holds;
    bool incl_ba = compare_languages(b, a, CompareMode::Inclusion).holds;
    CHECK(eq == (incl_ab && incl_ba));
  }
}

TEST_CASE("restriction output is always included in the plant language") {
  std::mt19937_64 rng(555);
  for (int round = 0; round < 25; ++round) {
    Automaton g = gen::random_plant(rng);
    Automaton h = restrict_to_safe_states(g, gen::random_safe(rng, g));
    h.name = "H";
    CHECK(compare_languages(h, g, CompareMode::Inclusion).holds);
  }
}

TEST_CASE("operations are safe to run concurrently on shared values") {
  Automaton g1 = fx::fix_coord_g1();
  Automaton g2 = fx::fix_coord_g2();
  Automaton reference = compose_parallel(g1, g2);
  std::vector<Automaton> results(8);
  std::vector<std::thread> threads;
  for (auto& slot : results) {
    threads.emplace_back([&g1, &g2, &slot] { slot = compose_parallel(g1, g2); });
  }
  for (auto& t : threads) t.join();
  for (const auto& r : results) CHECK(r == reference);
}
