#pragma once

#include <stdexcept>
#include <string>

namespace kq {

/** Base of every error the library raises on purpose. */
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Caller supplied something inconsistent (bad table, bad JSON, bad flag).
struct InputError : Error {
  using Error::Error;
};

/// A requested root of unity or subfield is not available in the target ring.
struct DivisibilityError : Error {
  using Error::Error;
};

/// A rational with denominator divisible by p was mapped into Z_q.
struct NotPIntegral : Error {
  using Error::Error;
};

/// Finite p-adic precision was not enough to certify a result.
struct PrecisionExhausted : Error {
  using Error::Error;
};

struct CorrespondentUndefined : Error {
  using Error::Error;
};

struct NotAbelian : Error {
  using Error::Error;
};

struct NotPGroup : Error {
  using Error::Error;
};

struct InconsistentInvariants : Error {
  using Error::Error;
};

/// An internal consistency check failed; indicates a bug or a false claim.
struct InvariantViolation : Error {
  using Error::Error;
};

}  // namespace kq
