#include "desa/model_io.hpp"

#include <sstream>

namespace desa {

namespace {

void check_token_name(const std::string& kind, const std::string& name, std::size_t line,
                      std::size_t col) {
  try {
    validate_name(kind, name);
  } catch (const Error& e) {
    throw ParseError(line, col, e.what());
  }
}

struct Token {
  std::string text;
  std::size_t col = 0;
};

struct Line {
  std::size_t no = 0;
  std::vector<Token> toks;
};

std::vector<Line> tokenize(const std::string& text) {
  std::vector<Line> out;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t nl = text.find('\n', start);
    std::string raw = text.substr(start, nl == std::string::npos ? nl : nl - start);
    ++line_no;
    std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw = raw.substr(0, hash);
    Line line;
    line.no = line_no;
    std::size_t i = 0;
    while (i < raw.size()) {
      if (raw[i] == ' ' || raw[i] == '\t' || raw[i] == '\r') {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < raw.size() && raw[j] != ' ' && raw[j] != '\t' && raw[j] != '\r') ++j;
      line.toks.push_back({raw.substr(i, j - i), i + 1});
      i = j;
    }
    if (!line.toks.empty()) out.push_back(std::move(line));
    if (nl == std::string::npos) break;
    start = nl + 1;
  }
  return out;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : lines_(tokenize(text)) {}

  ModelFile parse() {
    while (pos_ < lines_.size()) {
      const Line& l = cur();
      const std::string& head = l.toks[0].text;
      if (head == "automaton") {
        parse_automaton_block();
      } else if (head == "attack") {
        parse_attack_block();
      } else if (head == "observer") {
        parse_observer_block();
      } else if (head == "supervisor") {
        parse_supervisor_block();
      } else {
        fail(l, 0, "expected a block header, got '" + head + "'");
      }
    }
    return std::move(out_);
  }

 private:
  std::vector<Line> lines_;
  std::size_t pos_ = 0;
  ModelFile out_;

  const Line& cur() const { return lines_[pos_]; }

  [[noreturn]] void fail(const Line& l, std::size_t tok, const std::string& msg) const {
    std::size_t col = tok < l.toks.size() ? l.toks[tok].col : 1;
    throw ParseError(l.no, col, msg);
  }

  std::string block_name(const char* kind) {
    const Line& l = cur();
    if (l.toks.size() != 2) fail(l, 0, std::string("expected '") + kind + " NAME'");
    check_token_name(kind, l.toks[1].text, l.no, l.toks[1].col);
    return l.toks[1].text;
  }

  // Sections whose items live on the keyword line (and continuation lines).
  struct ListSection {
    std::vector<std::string>* target = nullptr;
  };

  /// Shared automaton-shaped sections; extra keywords are handled by the
  /// caller through the hooks below.
  struct AutoSections {
    Automaton a;
    bool marked_given = false;
    std::map<StateId, std::set<StateId>> estimates;
    std::set<StateId> safe;
    bool estimates_seen = false;
  };

  void parse_alphabet_entry(const Line& l, Alphabet& alph) {
    if (l.toks.size() < 2 || l.toks[1].text != ":") {
      fail(l, 0, "expected 'EVENT : [flags]' in alphabet section");
    }
    const std::string& name = l.toks[0].text;
    check_token_name("event", name, l.no, l.toks[0].col);
    if (alph.events.count(name)) fail(l, 0, "event '" + name + "' declared twice");
    bool obs = true;
    bool ctrl = true;
    bool sen = false;
    bool act = false;
    for (std::size_t i = 2; i < l.toks.size(); ++i) {
      const std::string& flag = l.toks[i].text;
      if (flag == "obs") {
        obs = true;
      } else if (flag == "unobs") {
        obs = false;
      } else if (flag == "ctrl") {
        ctrl = true;
      } else if (flag == "unctrl") {
        ctrl = false;
      } else if (flag == "sen-attack") {
        sen = true;
      } else if (flag == "act-attack") {
        act = true;
      } else {
        fail(l, i, "unknown alphabet flag '" + flag + "'");
      }
    }
    alph.events.insert(name);
    if (obs) alph.observable.insert(name);
    if (ctrl) alph.controllable.insert(name);
    if (sen) {
      if (!obs) fail(l, 0, "sen-attack requires event '" + name + "' to be observable");
      alph.sensor_attackable.insert(name);
    }
    if (act) {
      if (!ctrl) fail(l, 0, "act-attack requires event '" + name + "' to be controllable");
      alph.actuator_attackable.insert(name);
    }
  }

  void parse_trans_entry(const Line& l, Automaton& a) {
    if (l.toks.size() != 3) fail(l, 0, "expected 'SRC LABEL DST' in trans section");
    a.add_transition(l.toks[0].text, l.toks[1].text, l.toks[2].text);
  }

  void parse_estimate_entry(const Line& l, AutoSections& s) {
    if (l.toks.size() < 2 || l.toks[1].text != ":") {
      fail(l, 0, "expected 'STATE : [states]' in estimates section");
    }
    std::set<StateId> states;
    for (std::size_t i = 2; i < l.toks.size(); ++i) states.insert(l.toks[i].text);
    if (!s.estimates.emplace(l.toks[0].text, std::move(states)).second) {
      fail(l, 0, "estimate for state '" + l.toks[0].text + "' given twice");
    }
  }

  /// Parses automaton-style sections until 'end'. When observer_mode is set,
  /// 'safe:' and 'estimates:' are accepted too.
  AutoSections parse_auto_sections(const std::string& name, bool observer_mode) {
    AutoSections s;
    s.a.name = name;
    enum class Mode { None, Alphabet, States, Initial, Marked, Inserted, Trans, Safe, Estimates };
    Mode mode = Mode::None;
    std::size_t header_line = cur().no;
    ++pos_;
    for (;;) {
      if (pos_ >= lines_.size()) {
        throw ParseError(header_line, 1, "block '" + name + "' is missing 'end'");
      }
      const Line& l = cur();
      const std::string& head = l.toks[0].text;
      auto flat = [&](Mode m, std::set<std::string>& into) {
        for (std::size_t i = 1; i < l.toks.size(); ++i) into.insert(l.toks[i].text);
        mode = m;
      };
      if (head == "end") {
        ++pos_;
        break;
      } else if (head == "alphabet:") {
        if (l.toks.size() != 1) fail(l, 1, "alphabet entries go on their own lines");
        mode = Mode::Alphabet;
      } else if (head == "states:") {
        flat(Mode::States, s.a.states);
      } else if (head == "initial:") {
        if (l.toks.size() != 2) fail(l, 0, "expected 'initial: STATE'");
        s.a.initial = l.toks[1].text;
        mode = Mode::Initial;
      } else if (head == "marked:") {
        s.marked_given = true;
        flat(Mode::Marked, s.a.marked);
      } else if (head == "inserted:") {
        flat(Mode::Inserted, s.a.inserted);
      } else if (head == "trans:") {
        if (l.toks.size() != 1) fail(l, 1, "transitions go on their own lines");
        mode = Mode::Trans;
      } else if (observer_mode && head == "safe:") {
        flat(Mode::Safe, s.safe);
      } else if (observer_mode && head == "estimates:") {
        if (l.toks.size() != 1) fail(l, 1, "estimates go on their own lines");
        s.estimates_seen = true;
        mode = Mode::Estimates;
      } else {
        switch (mode) {
          case Mode::Alphabet:
            parse_alphabet_entry(l, s.a.alphabet);
            break;
          case Mode::Trans:
            parse_trans_entry(l, s.a);
            break;
          case Mode::Estimates:
            parse_estimate_entry(l, s);
            break;
          case Mode::States:
            for (std::size_t i = 0; i < l.toks.size(); ++i) s.a.states.insert(l.toks[i].text);
            break;
          case Mode::Marked:
            for (std::size_t i = 0; i < l.toks.size(); ++i) s.a.marked.insert(l.toks[i].text);
            break;
          case Mode::Inserted:
            for (std::size_t i = 0; i < l.toks.size(); ++i) s.a.inserted.insert(l.toks[i].text);
            break;
          case Mode::Safe:
            for (std::size_t i = 0; i < l.toks.size(); ++i) s.safe.insert(l.toks[i].text);
            break;
          default:
            fail(l, 0, "unexpected token '" + head + "' in block '" + name + "'");
        }
      }
      ++pos_;
    }
    if (!s.marked_given) s.a.marked = s.a.states;
    try {
      s.a.validate();
    } catch (const Error& e) {
      throw ParseError(header_line, 1, e.what());
    }
    return s;
  }

  void parse_automaton_block() {
    std::string name = block_name("automaton");
    AutoSections s = parse_auto_sections(name, false);
    out_.blocks.emplace_back(std::move(s.a));
  }

  void parse_observer_block() {
    std::string name = block_name("observer");
    std::size_t header_line = cur().no;
    AutoSections s = parse_auto_sections(name, true);
    ObserverAutomaton obs;
    obs.dfa = std::move(s.a);
    obs.safe_states = std::move(s.safe);
    obs.subset_of = std::move(s.estimates);
    try {
      obs.dfa.require_deterministic("observer '" + name + "'");
      for (const auto& q : obs.dfa.states) {
        if (!obs.subset_of.count(q)) throw Error("state '" + q + "' has no estimate");
      }
      for (const auto& [x, est] : obs.subset_of) {
        if (!obs.dfa.states.count(x)) throw Error("estimate key '" + x + "' is not a state");
        for (const auto& q : est) {
          if (!obs.safe_states.count(q)) {
            throw Error("estimated state '" + q + "' is not listed as safe");
          }
        }
      }
    } catch (const Error& e) {
      throw ParseError(header_line, 1, e.what());
    }
    out_.blocks.emplace_back(std::move(obs));
  }

  void parse_attack_block() {
    const Line& header = cur();
    if (header.toks.size() != 3 || header.toks[1].text != "on") {
      fail(header, 0, "expected 'attack on PLANT'");
    }
    const std::string plant_name = header.toks[2].text;
    const Automaton* plant = out_.find_automaton(plant_name);
    if (!plant) fail(header, 2, "attack references unknown plant '" + plant_name + "'");
    std::size_t header_line = header.no;
    ++pos_;

    AttackSpec spec;
    spec.plant_name = plant_name;
    auto add_entry = [&](const Line& l, const TransitionKey& tr, const std::string& fname) {
      const Automaton* f = out_.find_automaton(fname);
      if (!f) fail(l, 0, "attack references unknown automaton '" + fname + "'");
      if (!plant->has_transition(tr.src, tr.event, tr.dst)) {
        fail(l, 0, "attack target " + to_string(tr) + " is not a transition of '" + plant_name +
                       "'");
      }
      auto it = spec.entries.find(tr);
      if (it != spec.entries.end()) {
        if (!(it->second == *f)) {
          fail(l, 0, "conflicting attacks for transition " + to_string(tr));
        }
        return;
      }
      spec.entries.emplace(tr, *f);
    };
    for (;;) {
      if (pos_ >= lines_.size()) {
        throw ParseError(header_line, 1, "attack block is missing 'end'");
      }
      const Line& l = cur();
      const std::string& head = l.toks[0].text;
      if (head == "end") {
        ++pos_;
        break;
      } else if (head == "target:") {
        if (l.toks.size() != 6 || l.toks[4].text != "with") {
          fail(l, 0, "expected 'target: SRC EVENT DST with AUTOMATON'");
        }
        add_entry(l, {l.toks[1].text, l.toks[2].text, l.toks[3].text}, l.toks[5].text);
      } else if (head == "target-event:") {
        if (l.toks.size() != 4 || l.toks[2].text != "with") {
          fail(l, 0, "expected 'target-event: EVENT with AUTOMATON'");
        }
        const std::string& event = l.toks[1].text;
        bool found = false;
        for (const auto& [src, by_label] : plant->transitions) {
          auto jt = by_label.find(event);
          if (jt == by_label.end()) continue;
          for (const auto& dst : jt->second) {
            add_entry(l, {src, event, dst}, l.toks[3].text);
            found = true;
          }
        }
        if (!found) {
          fail(l, 1, "no transitions labelled '" + event + "' in plant '" + plant_name + "'");
        }
      } else {
        fail(l, 0, "unexpected token '" + head + "' in attack block");
      }
    }
    try {
      spec.validate(*plant);
    } catch (const Error& e) {
      throw ParseError(header_line, 1, e.what());
    }
    out_.blocks.emplace_back(std::move(spec));
  }

  void parse_supervisor_block() {
    std::string name = block_name("supervisor");
    std::size_t header_line = cur().no;
    ++pos_;

    std::string plant_ref;
    std::string observer_ref;
    std::set<EventId> off_domain;
    std::map<StateId, ControlPattern> pattern_of;
    bool off_domain_given = false;
    enum class Mode { None, OffDomain, Pattern };
    Mode mode = Mode::None;
    for (;;) {
      if (pos_ >= lines_.size()) {
        throw ParseError(header_line, 1, "supervisor block is missing 'end'");
      }
      const Line& l = cur();
      const std::string& head = l.toks[0].text;
      if (head == "end") {
        ++pos_;
        break;
      } else if (head == "plant:") {
        if (l.toks.size() != 2) fail(l, 0, "expected 'plant: NAME'");
        plant_ref = l.toks[1].text;
        mode = Mode::None;
      } else if (head == "observer:") {
        if (l.toks.size() != 2) fail(l, 0, "expected 'observer: NAME'");
        observer_ref = l.toks[1].text;
        mode = Mode::None;
      } else if (head == "off-domain:") {
        off_domain_given = true;
        for (std::size_t i = 1; i < l.toks.size(); ++i) off_domain.insert(l.toks[i].text);
        mode = Mode::OffDomain;
      } else if (head == "pattern:") {
        if (l.toks.size() != 1) fail(l, 1, "patterns go on their own lines");
        mode = Mode::Pattern;
      } else if (mode == Mode::Pattern) {
        if (l.toks.size() < 2 || l.toks[1].text != ":") {
          fail(l, 0, "expected 'STATE : [events]' in pattern section");
        }
        ControlPattern pat;
        for (std::size_t i = 2; i < l.toks.size(); ++i) pat.insert(l.toks[i].text);
        if (!pattern_of.emplace(l.toks[0].text, std::move(pat)).second) {
          fail(l, 0, "pattern for state '" + l.toks[0].text + "' given twice");
        }
      } else if (mode == Mode::OffDomain) {
        for (std::size_t i = 0; i < l.toks.size(); ++i) off_domain.insert(l.toks[i].text);
      } else {
        fail(l, 0, "unexpected token '" + head + "' in supervisor block");
      }
    }

    const Automaton* plant = out_.find_automaton(plant_ref);
    if (!plant) throw ParseError(header_line, 1, "supervisor references unknown plant '" + plant_ref + "'");
    const ObserverAutomaton* obs = out_.find_observer(observer_ref);
    if (!obs) {
      throw ParseError(header_line, 1,
                       "supervisor references unknown observer '" + observer_ref + "'");
    }

    SupervisorRealization sup;
    sup.name = name;
    sup.plant_name = plant_ref;
    sup.observer = *obs;
    sup.pattern_of = std::move(pattern_of);
    sup.off_domain_pattern = std::move(off_domain);
    sup.local_alphabet = plant->alphabet;
    try {
      if (!off_domain_given) throw Error("missing 'off-domain:' section");
      if (sup.observer.dfa.alphabet.events != sup.local_alphabet.observable) {
        throw Error("observer alphabet does not match the plant's observable events");
      }
      if (sup.off_domain_pattern != sup.local_alphabet.uncontrollable()) {
        throw Error("off-domain pattern must be exactly the uncontrollable local events");
      }
      for (const auto& x : sup.observer.dfa.marked) {
        auto it = sup.pattern_of.find(x);
        if (it == sup.pattern_of.end()) throw Error("marked state '" + x + "' has no pattern");
        std::set<EventId> rho = rho_disable(sup.observer.estimate_of(x), *plant,
                                            sup.observer.safe_states);
        std::set<EventId> expect = set_union(set_minus(sup.local_alphabet.events, rho),
                                             sup.off_domain_pattern);
        if (it->second != expect) {
          throw Error("pattern of state '" + x + "' does not match its estimate");
        }
      }
      for (const auto& [x, pat] : sup.pattern_of) {
        if (!sup.observer.dfa.marked.count(x)) {
          throw Error("pattern key '" + x + "' is not a marked observer state");
        }
      }
      for (const auto& q : sup.observer.safe_states) {
        if (!plant->states.count(q)) {
          throw Error("observer safe state '" + q + "' is not a state of the plant");
        }
      }
    } catch (const Error& e) {
      throw ParseError(header_line, 1, e.what());
    }
    out_.blocks.emplace_back(std::move(sup));
  }
};

void serialize_alphabet(std::ostringstream& os, const Alphabet& alph) {
  os << "  alphabet:\n";
  for (const auto& e : alph.events) {
    os << "    " << e << " : " << (alph.observable.count(e) ? "obs" : "unobs") << " "
       << (alph.controllable.count(e) ? "ctrl" : "unctrl");
    if (alph.sensor_attackable.count(e)) os << " sen-attack";
    if (alph.actuator_attackable.count(e)) os << " act-attack";
    os << "\n";
  }
}

void serialize_flat(std::ostringstream& os, const char* key, const std::set<std::string>& items) {
  os << "  " << key << ":";
  for (const auto& s : items) os << " " << s;
  os << "\n";
}

void serialize_auto_body(std::ostringstream& os, const Automaton& a) {
  serialize_alphabet(os, a.alphabet);
  serialize_flat(os, "states", a.states);
  os << "  initial: " << a.initial << "\n";
  serialize_flat(os, "marked", a.marked);
  if (!a.inserted.empty()) serialize_flat(os, "inserted", a.inserted);
  if (a.transition_count() > 0) {
    os << "  trans:\n";
    for (const auto& [src, by_label] : a.transitions) {
      for (const auto& [label, dsts] : by_label) {
        for (const auto& dst : dsts) os << "    " << src << " " << label << " " << dst << "\n";
      }
    }
  }
}

void serialize_automaton(std::ostringstream& os, const Automaton& a) {
  os << "automaton " << a.name << "\n";
  serialize_auto_body(os, a);
  os << "end\n";
}

void serialize_attack(std::ostringstream& os, const AttackSpec& atk) {
  os << "attack on " << atk.plant_name << "\n";
  for (const auto& [tr, f] : atk.entries) {
    os << "  target: " << tr.src << " " << tr.event << " " << tr.dst << " with " << f.name << "\n";
  }
  os << "end\n";
}

void serialize_observer(std::ostringstream& os, const ObserverAutomaton& obs) {
  os << "observer " << obs.dfa.name << "\n";
  serialize_auto_body(os, obs.dfa);
  serialize_flat(os, "safe", obs.safe_states);
  os << "  estimates:\n";
  for (const auto& q : obs.dfa.states) {
    os << "    " << q << " :";
    for (const auto& s : obs.estimate_of(q)) os << " " << s;
    os << "\n";
  }
  os << "end\n";
}

void serialize_supervisor(std::ostringstream& os, const SupervisorRealization& sup) {
  os << "supervisor " << sup.name << "\n";
  os << "  plant: " << sup.plant_name << "\n";
  os << "  observer: " << sup.observer.dfa.name << "\n";
  serialize_flat(os, "off-domain", sup.off_domain_pattern);
  os << "  pattern:\n";
  for (const auto& [x, pat] : sup.pattern_of) {
    os << "    " << x << " :";
    for (const auto& e : pat) os << " " << e;
    os << "\n";
  }
  os << "end\n";
}

}  // namespace

const Automaton* ModelFile::find_automaton(const std::string& name) const {
  for (const auto& b : blocks) {
    if (const auto* a = std::get_if<Automaton>(&b); a && a->name == name) return a;
  }
  return nullptr;
}

const Automaton* ModelFile::first_automaton() const {
  for (const auto& b : blocks) {
    if (const auto* a = std::get_if<Automaton>(&b)) return a;
  }
  return nullptr;
}

const ObserverAutomaton* ModelFile::find_observer(const std::string& name) const {
  for (const auto& b : blocks) {
    if (const auto* o = std::get_if<ObserverAutomaton>(&b); o && o->dfa.name == name) return o;
  }
  return nullptr;
}

const ObserverAutomaton* ModelFile::first_observer() const {
  for (const auto& b : blocks) {
    if (const auto* o = std::get_if<ObserverAutomaton>(&b)) return o;
  }
  return nullptr;
}

const SupervisorRealization* ModelFile::first_supervisor() const {
  for (const auto& b : blocks) {
    if (const auto* s = std::get_if<SupervisorRealization>(&b)) return s;
  }
  return nullptr;
}

std::vector<const SupervisorRealization*> ModelFile::supervisors() const {
  std::vector<const SupervisorRealization*> out;
  for (const auto& b : blocks) {
    if (const auto* s = std::get_if<SupervisorRealization>(&b)) out.push_back(s);
  }
  return out;
}

AttackSpec ModelFile::merged_attack_on(const Automaton& plant) const {
  AttackSpec out;
  out.plant_name = plant.name;
  for (const auto& b : blocks) {
    const auto* atk = std::get_if<AttackSpec>(&b);
    if (!atk || atk->plant_name != plant.name) continue;
    for (const auto& [tr, f] : atk->entries) {
      auto it = out.entries.find(tr);
      if (it == out.entries.end()) {
        out.entries.emplace(tr, f);
      } else if (!(it->second == f)) {
        throw Error("conflicting attacks for transition " + to_string(tr) + " of '" + plant.name +
                    "'");
      }
    }
  }
  out.validate(plant);
  return out;
}

ModelFile parse_model(const std::string& text) { return Parser(text).parse(); }

std::string serialize_model(const ModelFile& file) {
  std::ostringstream os;
  bool first = true;
  for (const auto& b : file.blocks) {
    if (!first) os << "\n";
    first = false;
    std::visit(
        [&](const auto& block) {
          using T = std::decay_t<decltype(block)>;
          if constexpr (std::is_same_v<T, Automaton>) {
            serialize_automaton(os, block);
          } else if constexpr (std::is_same_v<T, AttackSpec>) {
            serialize_attack(os, block);
          } else if constexpr (std::is_same_v<T, ObserverAutomaton>) {
            serialize_observer(os, block);
          } else {
            serialize_supervisor(os, block);
          }
        },
        b);
  }
  return os.str();
}

void append_attack_blocks(ModelFile& out, const AttackSpec& atk) {
  AttackSpec renamed = atk;
  for (auto& [tr, f] : renamed.entries) {
    std::string base = f.name;
    for (int n = 2;; ++n) {
      const Automaton* existing = out.find_automaton(f.name);
      if (!existing) {
        out.blocks.emplace_back(f);
        break;
      }
      if (*existing == f) break;  // already present by value
      f.name = base + std::to_string(n);
    }
  }
  out.blocks.emplace_back(std::move(renamed));
}

ModelFile coordination_to_model(const Automaton& g1, const Automaton& g2,
                                const CoordinationOutcome& outcome) {
  if (!outcome.success) throw Error("cannot export an unsuccessful coordination synthesis");
  ModelFile out;
  Automaton g1c = g1;
  g1c.name = "G1";
  Automaton g2c = g2;
  g2c.name = "G2";
  Automaton kc = outcome.k;
  kc.name = "K";
  out.blocks.emplace_back(std::move(g1c));
  out.blocks.emplace_back(std::move(g2c));
  out.blocks.emplace_back(std::move(kc));
  for (int i = 0; i < 2; ++i) {
    const LocalSynthesis& local = outcome.local[i];
    const std::string tag = std::to_string(i + 1);
    Automaton plant = local.plant;
    plant.name = "LocalPlant" + tag;
    out.blocks.emplace_back(plant);

    AttackSpec atk = local.attack;
    atk.plant_name = plant.name;
    append_attack_blocks(out, atk);

    SupervisorRealization sup = *local.supervisor;
    sup.name = "Supervisor" + tag;
    sup.plant_name = plant.name;
    sup.observer.dfa.name = "Observer" + tag;
    out.blocks.emplace_back(sup.observer);
    out.blocks.emplace_back(std::move(sup));
  }
  return out;
}

CoordinationBundle coordination_from_model(const ModelFile& file) {
  auto need_automaton = [&](const std::string& name) {
    const Automaton* a = file.find_automaton(name);
    if (!a) throw Error("coordination bundle is missing automaton '" + name + "'");
    return *a;
  };
  CoordinationBundle bundle{need_automaton("G1"), need_automaton("G2"), need_automaton("K"), {}};
  auto sups = file.supervisors();
  if (sups.size() != 2) throw Error("coordination bundle must contain exactly two supervisors");
  for (int i = 0; i < 2; ++i) {
    Automaton plant = need_automaton(sups[i]->plant_name);
    AttackSpec atk = file.merged_attack_on(plant);
    bundle.loops[i] = LocalLoop{std::move(plant), std::move(atk), *sups[i]};
  }
  return bundle;
}

CoordinationOutcome outcome_from_bundle(const CoordinationBundle& bundle) {
  CoordinationOutcome out;
  out.success = true;
  ParallelComposition comp = compose_parallel_tracked(bundle.g1, bundle.g2);
  out.global_plant = comp.product;
  out.global_parts = comp.parts;
  out.k = bundle.k;
  for (int i = 0; i < 2; ++i) {
    LocalSynthesis& local = out.local[i];
    local.plant = bundle.loops[i].plant;
    local.attack = bundle.loops[i].attack;
    local.alphabet = local.plant.alphabet;
    local.safe = bundle.loops[i].sup.observer.safe_states;
    local.safe_automaton = restrict_to_safe_states(local.plant, local.safe);
    local.safe_automaton.name = "SafePart" + std::to_string(i + 1);
    local.supervisor = bundle.loops[i].sup;
  }
  return out;
}

}  // namespace desa
