#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace fracid {

/// Base class for all library errors. code() is a stable, machine-greppable
/// class name; the CLI prints failures as `error[<code>]: <message>`.
class Error : public std::runtime_error {
  public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

  private:
    std::string code_;
};

struct InvalidArgument : Error {
    explicit InvalidArgument(const std::string& message) : Error("InvalidArgument", message) {}
};

/// The recursion denominator a2*h^-alpha + a1*h^-beta + a0 vanishes for the
/// requested step size, so the discrete response is undefined.
struct DegenerateDenominator : Error {
    explicit DegenerateDenominator(const std::string& message) : Error("DegenerateDenominator", message) {}
};

struct ZeroA0 : Error {
    explicit ZeroA0(const std::string& message) : Error("ZeroA0", message) {}
};

struct LengthMismatch : Error {
    explicit LengthMismatch(const std::string& message) : Error("LengthMismatch", message) {}
};

struct SingularNormalMatrix : Error {
    explicit SingularNormalMatrix(const std::string& message) : Error("SingularNormalMatrix", message) {}
};

struct InvalidConfig : Error {
    explicit InvalidConfig(const std::string& message) : Error("InvalidConfig", message) {}
};

struct NoFeasibleCandidate : Error {
    explicit NoFeasibleCandidate(const std::string& message) : Error("NoFeasibleCandidate", message) {}
};

struct ParseError : Error {
    explicit ParseError(const std::string& message) : Error("ParseError", message) {}
};

struct NonUniformGrid : Error {
    explicit NonUniformGrid(const std::string& message) : Error("NonUniformGrid", message) {}
};

struct TooShort : Error {
    explicit TooShort(const std::string& message) : Error("TooShort", message) {}
};

struct IoError : Error {
    explicit IoError(const std::string& message) : Error("IoError", message) {}
};

}  // namespace fracid
