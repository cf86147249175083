#ifndef RFSCOPE_ERRORS_HPP
#define RFSCOPE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rfscope {

/// Base class for all library errors. The CLI maps these to exit code 1.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input text (JSON or CSV). Messages carry a position or row number.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& what) : Error(what) {}
};

/// Structurally valid input that violates a domain invariant.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& what) : Error(what) {}
};

} // namespace rfscope

#endif
