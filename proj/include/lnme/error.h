// Copyright (c) 2026 The lnme developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef LNME_ERROR_H
#define LNME_ERROR_H

#include <stdexcept>
#include <string>

namespace lnme {

/// Base class for every error raised by the library. The subclass picks the
/// CLI exit code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid arguments or parameter combinations.
class UsageError : public Error {
public:
    using Error::Error;
};

/// Malformed or inconsistent input data.
class DataError : public Error {
public:
    using Error::Error;
};

/// A configured work budget (enumeration size, horizon) was exceeded.
class BudgetError : public Error {
public:
    using Error::Error;
};

} // namespace lnme

#endif // LNME_ERROR_H
