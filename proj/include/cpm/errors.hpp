#pragma once

#include <stdexcept>
#include <string>

namespace cpm {

// Every failure raised by the library derives from cpm::Error so the C API
// can map it onto a stable error code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class AddressError : public Error {
public:
    using Error::Error;
};

class InstructionError : public Error {
public:
    using Error::Error;
};

class ArgumentError : public Error {
public:
    using Error::Error;
};

class LookupError : public Error {
public:
    using Error::Error;
};

class AllocationError : public Error {
public:
    using Error::Error;
};

class PlanError : public Error {
public:
    using Error::Error;
};

}  // namespace cpm
