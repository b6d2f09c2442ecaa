#pragma once

#include <stdexcept>
#include <string>

namespace walkdens {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class NonConvergence : public Error {
public:
    using Error::Error;
};

class PoleError : public Error {
public:
    using Error::Error;
};

class SingularInput : public Error {
public:
    using Error::Error;
};

class GuardExceeded : public Error {
public:
    using Error::Error;
};

class MethodUnavailable : public Error {
public:
    using Error::Error;
};

class SlowConvergence : public Error {
public:
    using Error::Error;
};

class InvalidParameter : public Error {
public:
    using Error::Error;
};

}  // namespace walkdens
