#pragma once

#include <stdexcept>
#include <string>

namespace segqa {

/// Base class for all recoverable pipeline errors. The CLI maps these to
/// exit code 2 (data error); anything else escaping to main is internal (3).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// -- volume / grid --------------------------------------------------------

class ShapeMismatch : public Error {
public:
    using Error::Error;
};

class EmptyTarget : public Error {
public:
    using Error::Error;
};

// -- I/O ------------------------------------------------------------------

class MalformedHeader : public Error {
public:
    using Error::Error;
};

class PayloadSizeMismatch : public Error {
public:
    using Error::Error;
};

class ValueOutOfRange : public Error {
public:
    using Error::Error;
};

class IoFailure : public Error {
public:
    using Error::Error;
};

class MissingFile : public Error {
public:
    using Error::Error;
};

class InconsistentT : public Error {
public:
    using Error::Error;
};

// -- fusion / metrics / doubt ----------------------------------------------

class ConstantVolume : public Error {
public:
    using Error::Error;
};

class EmptySampleList : public Error {
public:
    using Error::Error;
};

class EmptyMask : public Error {
public:
    using Error::Error;
};

class EmptySegmentation : public Error {
public:
    using Error::Error;
};

// -- synth ------------------------------------------------------------------

class InvalidSpec : public Error {
public:
    using Error::Error;
};

} // namespace segqa
