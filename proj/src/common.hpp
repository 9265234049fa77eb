#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace plunge {

enum class Status : int {
  ok = 0,
  invalid_argument = 1,
  precondition = 2,
  cap_exceeded = 3,
  numerical = 4,
  unsupported = 5,
  io = 6,
  internal = 7,
};

class Error : public std::runtime_error {
 public:
  Error(Status s, const std::string& what) : std::runtime_error(what), status_(s) {}
  Status status() const { return status_; }

 private:
  Status status_;
};

[[noreturn]] inline void fail(Status s, const std::string& what) { throw Error(s, what); }

inline void require(bool cond, Status s, const std::string& what) {
  if (!cond) fail(s, what);
}

using Index = std::int64_t;

constexpr double kPi = 3.14159265358979323846;

}  // namespace plunge
