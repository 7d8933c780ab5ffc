#pragma once

#include <stdexcept>
#include <string>

namespace normalfan {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class InconsistentSystem : public Error {
public:
    using Error::Error;
};

class EmptyPolyhedron : public Error {
public:
    EmptyPolyhedron() : Error("polyhedron is empty") {}
};

class NotComparable : public Error {
public:
    using Error::Error;
};

class NotACone : public Error {
public:
    NotACone() : Error("polyhedron is not a cone") {}
};

class CoverViolation : public Error {
public:
    using Error::Error;
};

class StratumMismatch : public Error {
public:
    using Error::Error;
};

class GenerationError : public Error {
public:
    using Error::Error;
};

} // namespace normalfan
