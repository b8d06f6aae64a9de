// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace vasotherm {

// Base error for all user-facing failures.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A runtime invariant of the model was violated (exit code 2).
class InvariantViolation : public Error {
public:
    using Error::Error;
};

// An iterative procedure did not reach its tolerance (exit code 3).
class NotConverged : public Error {
public:
    using Error::Error;
};

inline void require(bool ok, const std::string& msg)
{
    if (!ok)
        throw Error(msg);
}

inline void require_invariant(bool ok, const std::string& msg)
{
    if (!ok)
        throw InvariantViolation(msg);
}

} // namespace vasotherm
