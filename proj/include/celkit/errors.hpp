#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace celkit {

// Base of every error thrown by the library. Each subclass maps to one
// CLI exit code, so keep the hierarchy flat.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error(msg) {}
};

// Malformed input file; line is 1-based (0 = whole file).
class FormatError : public Error {
public:
    FormatError(const std::string& msg, std::size_t line = 0)
        : Error(line ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// Concept surface-syntax error; position is a 0-based byte offset.
class SyntaxError : public Error {
public:
    SyntaxError(const std::string& msg, std::size_t position)
        : Error(msg + " at position " + std::to_string(position)), position_(position) {}
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

class UnknownTokenError : public SyntaxError {
public:
    UnknownTokenError(const std::string& msg, std::size_t position) : SyntaxError(msg, position) {}
};

// A concept/role/individual name outside the knowledge base signature.
class UnknownNameError : public Error {
public:
    explicit UnknownNameError(const std::string& name) : Error("unknown name: " + name), name_(name) {}
    const std::string& name() const { return name_; }

private:
    std::string name_;
};

class InvalidProblemError : public Error {
public:
    explicit InvalidProblemError(const std::string& msg) : Error(msg) {}
};

class EmptyFrontierError : public Error {
public:
    EmptyFrontierError() : Error("search frontier is empty") {}
};

class MissingIndividualError : public Error {
public:
    explicit MissingIndividualError(const std::string& name)
        : Error("no embedding for individual: " + name), name_(name) {}
    const std::string& name() const { return name_; }

private:
    std::string name_;
};

class DimensionMismatchError : public Error {
public:
    DimensionMismatchError(const std::string& msg, std::size_t line = 0)
        : Error(line ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class ShapeMismatchError : public Error {
public:
    explicit ShapeMismatchError(const std::string& msg) : Error(msg) {}
};

class NoConceptsFoundError : public Error {
public:
    explicit NoConceptsFoundError(const std::string& msg) : Error(msg) {}
};

}  // namespace celkit
