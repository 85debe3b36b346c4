#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace fairfix {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or mismatched input: dimensions, files, columns, cells.
class InputError : public Error {
public:
    using Error::Error;
};

/// A non-finite value appeared while evaluating layer `layer()`.
class NumericError : public Error {
public:
    NumericError(const std::string& what, std::size_t layer)
        : Error(what), layer_(layer) {}
    std::size_t layer() const noexcept { return layer_; }

private:
    std::size_t layer_;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

/// A fairness metric whose conditioning class is empty.
class UndefinedMetric : public Error {
public:
    using Error::Error;
};

/// SettSame requested on a dataset whose label differs from the sensitive attribute.
class SettingMismatch : public Error {
public:
    using Error::Error;
};

/// A bias ratio with no usable value (both costs infinite). `cell()` names the offending subset.
class DegenerateBias : public Error {
public:
    DegenerateBias(const std::string& what, std::string cell)
        : Error(what), cell_(std::move(cell)) {}
    const std::string& cell() const noexcept { return cell_; }

private:
    std::string cell_;
};

/// The repair set has no misclassified samples, so there is nothing to localize.
class NothingToLocalize : public Error {
public:
    using Error::Error;
};

}  // namespace fairfix
