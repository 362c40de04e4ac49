#pragma once

#include <stdexcept>
#include <string>

namespace divkit {

enum class ErrorKind {
  validation,         // malformed or inconsistent input
  not_found,          // unknown id, attribute, team name
  wrong_regime,       // solver called outside its parameter regime
  insufficient_data,  // not enough samples for an estimate
  numerical,          // non-finite intermediate state
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool ok, ErrorKind kind, const std::string& what) {
  if (!ok) fail(kind, what);
}

}  // namespace divkit
