#ifndef CRAB_ERROR_HPP
#define CRAB_ERROR_HPP

#include <stdexcept>
#include <string>

namespace crab {

// Error hierarchy. Everything thrown by the library derives from Error so
// the C boundary can map exceptions onto status codes in one place.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class IoError : public Error {
public:
    using Error::Error;
};

// Malformed input file (carries a line number where applicable).
class ParseError : public Error {
public:
    ParseError(const std::string& msg, long line = -1)
        : Error(line >= 0 ? msg + " (line " + std::to_string(line) + ")" : msg),
          line_(line) {}
    long line() const { return line_; }

private:
    long line_;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

// Query against the pool that violates pool membership.
class InvalidQueryError : public Error {
public:
    using Error::Error;
};

class TrainingError : public Error {
public:
    using Error::Error;
};

// Synthetic-dataset target could not be reached; carries best achieved value.
class TargetError : public Error {
public:
    TargetError(const std::string& msg, double achieved)
        : Error(msg), achieved_(achieved) {}
    double achieved() const { return achieved_; }

private:
    double achieved_;
};

} // namespace crab

#endif
