#pragma once

#include <stdexcept>
#include <string>

namespace monogap {

/// A "cannot happen" state: an invariant the code relies on was violated.
struct internal_error : std::logic_error {
    explicit internal_error(const std::string& msg) : std::logic_error("internal error: " + msg) {}
};

/// A randomized / budgeted search ran out of budget without a hit.
struct search_exhausted : std::runtime_error {
    explicit search_exhausted(const std::string& msg) : std::runtime_error(msg) {}
};

/// Two intervals admit no supported order-preserving bijection.
struct unsupported_interval_pair : std::invalid_argument {
    explicit unsupported_interval_pair(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Rejection sampling gave up: the interval leaves no room at the requested scale.
struct sampling_exhausted : std::runtime_error {
    explicit sampling_exhausted(const std::string& msg) : std::runtime_error(msg) {}
};

/// An exact witness could not be turned into a concrete matrix pair; the
/// exact-level witness itself remains valid.
struct conversion_failed : std::runtime_error {
    explicit conversion_failed(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace monogap
