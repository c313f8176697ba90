#pragma once

#include <stdexcept>
#include <string>

namespace mar {

/// Base class for every error thrown by the library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operand shapes do not agree.
class dimension_error : public error {
public:
    using error::error;
};

/// Input data cannot support the requested computation (too short, constant, non-finite).
class data_error : public error {
public:
    using error::error;
};

/// A model or parameter violates a precondition such as stability.
class model_error : public error {
public:
    using error::error;
};

} // namespace mar
