#pragma once

#include <stdexcept>
#include <string>

namespace dtqc {

/// Failure classes surfaced by the library. The CLI maps each class onto a
/// distinct process exit code.
enum class ErrorKind {
    size,        // chain length outside the supported range
    partition,   // left/right split inconsistent with the chain
    naming,      // unknown named state, preset or column
    consistency, // mismatched dimensions or bases
    sampling,    // non-uniform or too-short time grid
    windowing,   // lifetime window does not fit the series
    numerical,   // eigensolver or Krylov failure
    validation,  // bad configuration values
    io,          // file access or parse failures
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string &what) : std::runtime_error(what), kind_(kind) {}
    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[nodiscard]] const char *to_string(ErrorKind kind) noexcept;

} // namespace dtqc
