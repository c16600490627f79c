#pragma once

#include <stdexcept>
#include <string>

namespace hopchain {

// Error categories; the C API maps these one-to-one onto hc_status values.
enum class errc {
  io = 1,
  parse = 2,
  invalid_argument = 3,
  dim_mismatch = 4,
  stale_index = 5,
  infeasible = 6,
  diverged = 7,
  internal = 8,
};

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& what) { throw Error(code, what); }

}  // namespace hopchain
