#pragma once

#include <stdexcept>
#include <string>

namespace genjacobi {

/// Base class of every error raised by the library. The CLI maps the
/// concrete subclasses onto its exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument of the gamma function sits on (or within tolerance of) a pole.
class PoleError : public Error {
public:
    using Error::Error;
};

class NoConvergence : public Error {
public:
    using Error::Error;
};

/// Contour geometry is invalid (bad radius, circle touching a branch point, ...).
class GeometryError : public Error {
public:
    using Error::Error;
};

class BranchPointError : public Error {
public:
    using Error::Error;
};

/// Adaptive subdivision (branch tracking or quadrature) exhausted its depth cap.
class RefinementLimit : public Error {
public:
    using Error::Error;
};

class DivergentIntegral : public Error {
public:
    using Error::Error;
};

/// alpha, beta or alpha+beta is an integer where the classifier needs them not to be.
class IntegerParameter : public Error {
public:
    using Error::Error;
};

class KappaZero : public Error {
public:
    using Error::Error;
};

class CapExceeded : public Error {
public:
    using Error::Error;
};

class ConditionViolated : public Error {
public:
    using Error::Error;
};

class TooCloseToContour : public Error {
public:
    using Error::Error;
};

class SelfIntersectionTooClose : public Error {
public:
    using Error::Error;
};

class IllConditioned : public Error {
public:
    using Error::Error;
};

class RegimeNotCharacterizing : public Error {
public:
    using Error::Error;
};

} // namespace genjacobi
