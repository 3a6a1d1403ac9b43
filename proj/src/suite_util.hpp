#pragma once

#include <functional>
#include <string>

#include "transfinite/error.hpp"
#include "transfinite/reproduce.hpp"

namespace transfinite::suites {

[[noreturn]] inline void mismatch(const std::string& what) { throw Error(ErrorKind::VerificationError, what); }

inline void expect(bool ok, const std::string& what) {
  if (!ok) mismatch(what);
}

/// Runs fn; its return value is the detail of a passing check, any Error fails it.
inline void run_check(SuiteReport& r, std::string criterion, std::string name, const std::function<std::string()>& fn) {
  SuiteCheck c{std::move(criterion), std::move(name), false, {}};
  try {
    c.detail = fn();
    c.passed = true;
  } catch (const std::exception& e) {
    c.detail = e.what();
  }
  r.checks.push_back(std::move(c));
}

}  // namespace transfinite::suites
