#pragma once

#include <stdexcept>
#include <string>

namespace qubosel {

// Base class for every error raised by this library. Messages are meant to be
// printable as-is by the CLI.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a solver precondition is violated (CLI maps these to exit 3,
// everything else derived from Error maps to exit 2).
class SolverPreconditionError : public Error {
 public:
  using Error::Error;
};

#define QUBOSEL_DEFINE_ERROR(Name, Base)    \
  class Name : public Base {                \
   public:                                  \
    using Base::Base;                       \
  };

// txmodel
QUBOSEL_DEFINE_ERROR(AddressNotInTxError, Error)

// ingest
QUBOSEL_DEFINE_ERROR(ParseError, Error)
QUBOSEL_DEFINE_ERROR(InvariantError, Error)
QUBOSEL_DEFINE_ERROR(UnknownLabelError, Error)
QUBOSEL_DEFINE_ERROR(DuplicateAddressError, Error)
QUBOSEL_DEFINE_ERROR(NonMonotonicDatesError, Error)
QUBOSEL_DEFINE_ERROR(NonPositiveRateError, Error)
QUBOSEL_DEFINE_ERROR(EmptyTableError, Error)
QUBOSEL_DEFINE_ERROR(InvalidConfigError, Error)

// features
QUBOSEL_DEFINE_ERROR(NonPositiveAmountError, Error)
QUBOSEL_DEFINE_ERROR(EmptyHistoryError, Error)
QUBOSEL_DEFINE_ERROR(DegenerateOutcomeError, Error)

// qubo
QUBOSEL_DEFINE_ERROR(LengthMismatchError, Error)
QUBOSEL_DEFINE_ERROR(TooFewSamplesError, Error)
QUBOSEL_DEFINE_ERROR(AlphaOutOfRangeError, Error)
QUBOSEL_DEFINE_ERROR(TooManyFeaturesError, SolverPreconditionError)
QUBOSEL_DEFINE_ERROR(InvalidScheduleError, SolverPreconditionError)
QUBOSEL_DEFINE_ERROR(UnknownFeatureNameError, Error)

// io
QUBOSEL_DEFINE_ERROR(IoError, Error)

// forest
QUBOSEL_DEFINE_ERROR(EmptyLabelsError, Error)
QUBOSEL_DEFINE_ERROR(NoFeaturesSelectedError, Error)
QUBOSEL_DEFINE_ERROR(MaskMismatchError, Error)
QUBOSEL_DEFINE_ERROR(SingleClassError, Error)
QUBOSEL_DEFINE_ERROR(ClassTooSmallError, Error)

#undef QUBOSEL_DEFINE_ERROR

}  // namespace qubosel
