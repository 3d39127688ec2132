#pragma once

#include <iosfwd>
#include <memory>
#include <string_view>

#include "silmarils/error.hpp"
#include "silmarils/field.hpp"

namespace silmarils::cli {

enum Exit : int {
  kOk = 0,
  kReject = 1,
  kUsage = 2,
  kIo = 3,
  kMalformed = 4,
  kDegenerate = 5,
  kUnknownStrategy = 6,
};

int exit_code_for(ErrorCode code);

/// secure, toy-5, toy-7, toy-13, toy-251, toy-1009, toy-65537. Throws
/// Error(Usage) otherwise.
std::shared_ptr<const Prime> profile_prime(std::string_view profile);

/// Parses argv (argv[0] is the program name) and runs one subcommand.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace silmarils::cli
