#include "desa/types.hpp"

#include <algorithm>
#include <sstream>

namespace desa {

ParseError::ParseError(std::size_t line_, std::size_t column_, const std::string& what_)
    : Error("line " + std::to_string(line_) + ", column " + std::to_string(column_) + ": " + what_),
      line(line_),
      column(column_) {}

std::set<EventId> Alphabet::unobservable() const { return set_minus(events, observable); }

std::set<EventId> Alphabet::uncontrollable() const { return set_minus(events, controllable); }

void Alphabet::validate() const {
  for (const auto& e : events) validate_name("event", e);
  auto require_subset = [&](const std::set<EventId>& sub, const char* what) {
    for (const auto& e : sub) {
      if (!events.count(e)) throw Error(std::string(what) + " event '" + e + "' is not in the alphabet");
    }
  };
  require_subset(observable, "observable");
  require_subset(controllable, "controllable");
  for (const auto& e : sensor_attackable) {
    if (!observable.count(e)) throw Error("sensor-attackable event '" + e + "' is not observable");
  }
  for (const auto& e : actuator_attackable) {
    if (!controllable.count(e)) throw Error("actuator-attackable event '" + e + "' is not controllable");
  }
}

Alphabet Alphabet::restricted_to(const std::set<EventId>& target) const {
  Alphabet out;
  out.events = set_intersect(events, target);
  out.observable = set_intersect(observable, target);
  out.controllable = set_intersect(controllable, target);
  out.sensor_attackable = set_intersect(sensor_attackable, target);
  out.actuator_attackable = set_intersect(actuator_attackable, target);
  return out;
}

Alphabet Alphabet::merged(const Alphabet& a, const Alphabet& b) {
  for (const auto& e : set_intersect(a.events, b.events)) {
    if (a.observable.count(e) != b.observable.count(e)) {
      throw Error("conflicting observability attribute for shared event '" + e + "'");
    }
    if (a.controllable.count(e) != b.controllable.count(e)) {
      throw Error("conflicting controllability attribute for shared event '" + e + "'");
    }
  }
  Alphabet out;
  out.events = set_union(a.events, b.events);
  out.observable = set_union(a.observable, b.observable);
  out.controllable = set_union(a.controllable, b.controllable);
  out.sensor_attackable = set_union(a.sensor_attackable, b.sensor_attackable);
  out.actuator_attackable = set_union(a.actuator_attackable, b.actuator_attackable);
  out.validate();
  return out;
}

bool LengthLexLess::operator()(const StringSeq& a, const StringSeq& b) const {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

void validate_name(const std::string& kind, const std::string& name) {
  static const std::set<std::string> reserved = {"automaton", "attack", "observer", "supervisor",
                                                 "end",       "on",     "with"};
  if (name.empty()) throw Error(kind + " name must be non-empty");
  if (name == kEpsilon) throw Error(kind + " name '" + name + "' collides with the silent-move label");
  if (reserved.count(name)) throw Error(kind + " name '" + name + "' is a reserved word");
  for (char c : name) {
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      throw Error(kind + " name '" + name + "' contains whitespace");
    }
    if (c == '#' || c == ':') {
      throw Error(kind + " name '" + name + "' contains reserved character '" + std::string(1, c) + "'");
    }
  }
}

std::string format_seq(const StringSeq& s) {
  if (s.empty()) return "ε";
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ' ';
    out += s[i];
  }
  return out;
}

StringSeq parse_seq(const std::string& text) {
  StringSeq out;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::set<EventId> set_union(const std::set<EventId>& a, const std::set<EventId>& b) {
  std::set<EventId> out = a;
  out.insert(b.begin(), b.end());
  return out;
}

std::set<EventId> set_intersect(const std::set<EventId>& a, const std::set<EventId>& b) {
  std::set<EventId> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.begin()));
  return out;
}

std::set<EventId> set_minus(const std::set<EventId>& a, const std::set<EventId>& b) {
  std::set<EventId> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.begin()));
  return out;
}

std::string join(const std::set<std::string>& items, const std::string& sep) {
  std::string out;
  bool first = true;
  for (const auto& s : items) {
    if (!first) out += sep;
    out += s;
    first = false;
  }
  return out;
}

}  // namespace desa
