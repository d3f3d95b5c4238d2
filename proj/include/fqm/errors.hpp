#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace fqm {

/// Base type for all errors thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller broke an operation's contract (bad argument, unknown label,
/// degenerate input).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Input exceeds a hard size guard.  Guards fail loudly; nothing is
/// silently truncated.
class ResourceError : public Error {
public:
    using Error::Error;
};

/// Matrix file syntax error; line numbers are 1-based.
class ParseError : public Error {
public:
    ParseError(int line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

/// A structural check distilled from a proof failed.  Carries the offending
/// column labels.  When the input was independently verified to satisfy the
/// hypothesis, this is a falsification event rather than a user error.
class ContradictionError : public Error {
public:
    ContradictionError(const std::string& what, std::string first, std::string second = {})
        : Error(what), first_(std::move(first)), second_(std::move(second)) {}
    const std::string& first_column() const { return first_; }
    const std::string& second_column() const { return second_; }

private:
    std::string first_, second_;
};

/// A theorem-level assertion failed on a concrete instance.  details() holds
/// a serialized counterexample sufficient to replay the failure standalone.
class FalsificationError : public Error {
public:
    FalsificationError(const std::string& what, std::string details)
        : Error(what), details_(std::move(details)) {}
    const std::string& details() const { return details_; }

private:
    std::string details_;
};

}  // namespace fqm
