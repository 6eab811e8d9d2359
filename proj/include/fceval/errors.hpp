#pragma once

#include <stdexcept>
#include <string>

namespace fceval {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (NaN input, bad lag, p outside (0,1), ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Series that are supposed to be paired element-wise have different lengths.
class AlignmentError : public Error {
public:
    using Error::Error;
};

/// Not enough observations for the requested window, block count or test.
class InsufficientDataError : public Error {
public:
    using Error::Error;
};

/// A least-squares window whose design matrix is not of full column rank.
class RankDeficiencyError : public Error {
public:
    RankDeficiencyError(long origin, const std::string& what)
        : Error(what), origin_(origin) {}

    /// Forecast origin (time index) whose estimation window is singular.
    long origin() const noexcept { return origin_; }

private:
    long origin_;
};

/// A test statistic whose normalizing denominator is exactly zero.
class DegenerateStatisticError : public Error {
public:
    using Error::Error;
};

/// Malformed input file or configuration text.
class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace fceval
