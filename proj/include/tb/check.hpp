#pragma once

#include <stdexcept>
#include <string>

namespace tb {

// Thrown on violated preconditions, malformed input, and failed runtime
// assertions that the algorithms promise to enforce (never compiled out).
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

[[noreturn]] inline void fail(const std::string& msg) { throw Error(msg); }

inline void check(bool cond, const std::string& msg) {
    if (!cond) fail(msg);
}

}  // namespace tb
