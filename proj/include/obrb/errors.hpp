#pragma once

#include <stdexcept>
#include <string>

namespace obrb {

/// Invalid arguments or violated preconditions (bad grid sizes, alpha out of
/// range, incompatible right-hand sides, ...).
class invalid_argument_error : public std::invalid_argument {
  public:
    explicit invalid_argument_error(const std::string &msg) : std::invalid_argument(msg) {}
};

/// Configuration file problems: unknown keys, type mismatches, constraint
/// violations. Messages carry the offending line where available.
class config_error : public std::runtime_error {
  public:
    explicit config_error(const std::string &msg) : std::runtime_error(msg) {}
};

/// Linear solver or time stepper failure (non-convergence, NaN fields,
/// CFL violations detected mid-step).
class solver_error : public std::runtime_error {
  public:
    explicit solver_error(const std::string &msg) : std::runtime_error(msg) {}
};

/// I/O errors for checkpoints and output files.
class io_error : public std::runtime_error {
  public:
    explicit io_error(const std::string &msg) : std::runtime_error(msg) {}
};

} // namespace obrb
