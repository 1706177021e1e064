// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The aimcf Authors

#ifndef AIMCF_ERRORS_HPP
#define AIMCF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace aimcf {

/// Base for the two admissibility guards. `node` is the first offending grid
/// index, `stage` the RK stage (1..4) when raised inside a step, 0 otherwise.
class GuardViolation : public std::runtime_error {
public:
    GuardViolation(const std::string& what, int node, int stage = 0)
        : std::runtime_error(what), node_(node), stage_(stage) {}

    int node() const noexcept { return node_; }
    int stage() const noexcept { return stage_; }

private:
    int node_;
    int stage_;
};

/// |u_xi| >= (1 - eps_space) u somewhere: the graph touches the light cone.
class NotSpacelike : public GuardViolation {
public:
    using GuardViolation::GuardViolation;
};

/// u u_xixi + u^2 - 2 u_xi^2 <= eps_conv u^2 somewhere: the flow speed blows up.
class DegenerateConvexity : public GuardViolation {
public:
    using GuardViolation::GuardViolation;
};

class StepUnderflow : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, int line, int column)
        : std::runtime_error(what), line_(line), column_(column) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

/// A configuration value violates its constraint. `key()` names the JSON key.
class ValidationError : public std::runtime_error {
public:
    ValidationError(std::string key, const std::string& what)
        : std::runtime_error(key + ": " + what), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace aimcf

#endif // AIMCF_ERRORS_HPP
