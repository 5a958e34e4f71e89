#pragma once

#include <stdexcept>
#include <string>

namespace geolog {

// Every failure the library reports deliberately carries one of these kinds.
// The CLI maps kinds onto its exit-code contract: malformed input, symbol
// resolution, resource caps. Semantic verdicts (invalid sequent, failed
// check) are report values, not errors.
enum class ErrorKind {
  NotAPoset,             // order closure violates antisymmetry
  NotALattice,           // some pair lacks a meet or join
  NotAFrame,             // meet fails to distribute over some join
  UnknownElement,        // element id not in the frame
  SizeLimit,             // standard frame constructor over the element cap
  Syntax,                // concrete-syntax parse failure
  UnknownSymbol,         // undeclared constant / function / predicate
  ArityMismatch,         // declared arity disagrees with use
  Capture,               // substitution would capture a variable
  DuplicateTarget,       // simultaneous substitution lists a target twice
  UnknownDomainElement,  // domain id not in the interpretation
  ClosureOverflow,       // vector closure exceeded its cap
  NotClosed,             // alleged topological system fails its axioms
  BadInput,              // malformed file or argument shape
  Io,                    // file not readable / writable
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::NotAPoset: return "NotAPoset";
    case ErrorKind::NotALattice: return "NotALattice";
    case ErrorKind::NotAFrame: return "NotAFrame";
    case ErrorKind::UnknownElement: return "UnknownElement";
    case ErrorKind::SizeLimit: return "SizeLimit";
    case ErrorKind::Syntax: return "Syntax";
    case ErrorKind::UnknownSymbol: return "UnknownSymbol";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::Capture: return "Capture";
    case ErrorKind::DuplicateTarget: return "DuplicateTarget";
    case ErrorKind::UnknownDomainElement: return "UnknownDomainElement";
    case ErrorKind::ClosureOverflow: return "ClosureOverflow";
    case ErrorKind::NotClosed: return "NotClosed";
    case ErrorKind::BadInput: return "BadInput";
    case ErrorKind::Io: return "Io";
  }
  return "Error";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace geolog
