#pragma once

#include <stdexcept>
#include <string>

namespace sympca {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// An input violated a documented precondition (wrong shape, asymmetry, ...).
class ContractViolation : public Error {
public:
  using Error::Error;
};

/// A matrix required to be full rank is numerically rank deficient.
class RankDeficient : public Error {
public:
  using Error::Error;
};

/// A value left the domain of the requested function (e.g. log of a
/// nonpositive determinant, near-singular X*GX for Det/LogDet).
class DomainError : public Error {
public:
  using Error::Error;
};

/// Input claimed to be a stationary point fails the stationarity test.
class NotStationary : public Error {
public:
  using Error::Error;
};

/// A perturbation direction overlaps the support rows it must avoid.
class UnsupportedDirection : public Error {
public:
  using Error::Error;
};

/// The spectrum has fewer than p positive singular values, so the
/// rank-p program is ill-defined.
class InsufficientRank : public Error {
public:
  using Error::Error;
};

} // namespace sympca
