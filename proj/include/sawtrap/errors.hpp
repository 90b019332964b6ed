#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sawtrap {

/// Bad input: a precondition or a type invariant was violated.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed to reach its stated tolerance.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, double achieved = 0.0)
        : std::runtime_error(what), achieved_(achieved) {}

    double achieved() const noexcept { return achieved_; }

private:
    double achieved_;
};

/// Advisory messages (regime warnings). Passed by pointer; null means ignore.
struct Diagnostics {
    std::vector<std::string> warnings;

    void warn(std::string msg) { warnings.push_back(std::move(msg)); }
};

inline void warn(Diagnostics* diag, std::string msg) {
    if (diag != nullptr) diag->warn(std::move(msg));
}

}  // namespace sawtrap
