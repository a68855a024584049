#pragma once

#include <stdexcept>
#include <string>

namespace movm {

// Base of every error raised by the library. The CLI maps the subclasses
// onto exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the domain of a function (e.g. OVF at y < 0).
class DomainError : public Error {
public:
    using Error::Error;
};

// Requested value outside the range of a function (e.g. OVF inverse of v >= Vmax).
class RangeError : public Error {
public:
    using Error::Error;
};

// Malformed or inconsistent configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Numerical procedure failed to converge, or two independent routes disagree.
class NumericError : public Error {
public:
    using Error::Error;
};

// Numeric failure at one point of a parameter sweep.
class GridPointError : public NumericError {
public:
    GridPointError(const std::string& what, double a, double tau) : NumericError(what), a_(a), tau_(tau) {}
    double a() const noexcept { return a_; }
    double tau() const noexcept { return tau_; }

private:
    double a_;
    double tau_;
};

// A closed-form construction needs a non-degenerate input it did not get.
class DegenerateInputError : public Error {
public:
    using Error::Error;
};

// Invertibility / non-resonance assumptions of the normal-form computation failed.
class AssumptionViolation : public Error {
public:
    using Error::Error;
};

// Simulation state ran away (|v| or |y| above the blow-up threshold).
class BlowUpError : public Error {
public:
    BlowUpError(const std::string& what, double time) : Error(what), time_(time) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

// A vehicle pair never stays inside the settling band.
class NotSettledError : public Error {
public:
    using Error::Error;
};

// Oscillation amplitude still drifting over the retained window.
class NonStationaryError : public Error {
public:
    NonStationaryError(const std::string& what, double amplitude)
        : Error(what), amplitude_(amplitude) {}
    double amplitude() const noexcept { return amplitude_; }

private:
    double amplitude_;
};

}  // namespace movm
