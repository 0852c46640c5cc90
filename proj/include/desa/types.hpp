#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace desa {

using EventId = std::string;
using StateId = std::string;
using StringSeq = std::vector<EventId>;

/// Reserved transition label for silent moves. Never a declared event.
inline const EventId kEpsilon = "~";

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Parse failure with a 1-based source position.
class ParseError : public Error {
public:
  ParseError(std::size_t line, std::size_t column, const std::string& what);
  std::size_t line;
  std::size_t column;
};

/// Event set together with its observability, controllability and
/// attackability attributes. Unobservable/uncontrollable sets are derived,
/// never stored.
struct Alphabet {
  std::set<EventId> events;
  std::set<EventId> observable;
  std::set<EventId> controllable;
  std::set<EventId> sensor_attackable;    // subset of observable
  std::set<EventId> actuator_attackable;  // subset of controllable

  std::set<EventId> unobservable() const;
  std::set<EventId> uncontrollable() const;
  bool contains(const EventId& e) const { return events.count(e) > 0; }

  void validate() const;
  Alphabet restricted_to(const std::set<EventId>& target) const;

  /// Union of the two alphabets. Shared events must agree on observability
  /// and controllability; attackable sets merge by union.
  static Alphabet merged(const Alphabet& a, const Alphabet& b);

  bool operator==(const Alphabet&) const = default;
};

/// Outcome of a decision procedure. When the property fails and a witness
/// exists, it is the shortest one (ties broken length-lexicographically).
struct Verdict {
  bool holds = true;
  std::optional<StringSeq> witness;
  std::optional<EventId> witness_event;
  std::string detail;
};

/// Length-lexicographic order on event sequences: shorter first, then by
/// event name.
struct LengthLexLess {
  bool operator()(const StringSeq& a, const StringSeq& b) const;
};

/// Rejects names that would break tokenisation or collide with the
/// reserved epsilon label.
void validate_name(const std::string& kind, const std::string& name);

std::string format_seq(const StringSeq& s);
StringSeq parse_seq(const std::string& text);

std::set<EventId> set_union(const std::set<EventId>& a, const std::set<EventId>& b);
std::set<EventId> set_intersect(const std::set<EventId>& a, const std::set<EventId>& b);
std::set<EventId> set_minus(const std::set<EventId>& a, const std::set<EventId>& b);

std::string join(const std::set<std::string>& items, const std::string& sep);

}  // namespace desa
