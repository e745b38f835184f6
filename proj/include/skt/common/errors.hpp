// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace skt {

// Two parameter collections disagree on names, order, or lengths.
class AlignmentError : public std::runtime_error {
public:
    explicit AlignmentError(const std::string& what) : std::runtime_error(what) {}
};

// An argument is outside its documented domain (e.g. alpha not in [0,1]).
class DomainError : public std::invalid_argument {
public:
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

// Non-finite values where finite ones are required.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed file or payload content.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Remote endpoint failed after retries.
class EndpointError : public std::runtime_error {
public:
    explicit EndpointError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace skt
