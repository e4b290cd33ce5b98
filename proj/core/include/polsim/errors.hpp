#pragma once

#include <stdexcept>
#include <string>

namespace polsim {

// Base of every error raised by the library. The CLI maps these onto exit
// code 3 (numerical failure) except for ConfigError, which is a schema
// problem (exit 2).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

// Soft condition: the configuration is physically questionable but still
// computable. Callers can opt out with SizeCheck::allow_oversized.
class ConfigWarning : public Error {
public:
    using Error::Error;
};

class BlockadeExceedsMedium : public ConfigWarning {
public:
    BlockadeExceedsMedium(double z_b, double length)
        : ConfigWarning("blockade radius z_b = " + std::to_string(z_b) +
                        " exceeds medium length L = " + std::to_string(length)),
          z_b_(z_b), length_(length) {}
    double z_b() const noexcept { return z_b_; }
    double length() const noexcept { return length_; }

private:
    double z_b_;
    double length_;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class SingularFrequency : public DomainError {
public:
    SingularFrequency() : DomainError("omega = 0 is singular for the finite-frequency path; use the CW route") {}
};

class PoleError : public Error {
public:
    PoleError(double dz, double omega)
        : Error("susceptibility pole at dz = " + std::to_string(dz) + ", omega = " + std::to_string(omega)),
          dz_(dz), omega_(omega) {}
    double dz() const noexcept { return dz_; }
    double omega() const noexcept { return omega_; }

private:
    double dz_;
    double omega_;
};

class QuadratureError : public Error {
public:
    QuadratureError(const std::string& what, double achieved)
        : Error(what + " (achieved error estimate " + std::to_string(achieved) + ")"), achieved_(achieved) {}
    double achieved_error() const noexcept { return achieved_; }

private:
    double achieved_;
};

class ConditioningError : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public Error {
public:
    using Error::Error;
};

class TrackingAmbiguity : public Error {
public:
    explicit TrackingAmbiguity(double k)
        : Error("branch tracking ambiguous at k = " + std::to_string(k)), k_(k) {}
    double k() const noexcept { return k_; }

private:
    double k_;
};

class FitError : public Error {
public:
    using Error::Error;
};

class GridMismatch : public Error {
public:
    using Error::Error;
};

}  // namespace polsim
