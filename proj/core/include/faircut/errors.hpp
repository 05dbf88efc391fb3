#pragma once

#include <stdexcept>
#include <string>

namespace faircut {

/// Invalid caller-supplied data: bad ids, malformed files, violated preconditions.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// A computation was refused because it exceeds a configured size bound.
class RefusalError : public std::runtime_error {
 public:
  explicit RefusalError(const std::string& what) : std::runtime_error(what) {}
};

/// An internal consistency check failed; indicates a bug, not bad input.
class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw InputError(what);
}

inline void internal_check(bool cond, const std::string& what) {
  if (!cond) throw InternalError(what);
}

}  // namespace faircut
