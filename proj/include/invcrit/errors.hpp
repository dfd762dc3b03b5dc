#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace invcrit {

/// Argument outside the mathematical domain of an operation (bad m, p, g, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Lookup outside the knots of a tabulated model; no extrapolation is done.
class OutOfTableRange : public std::out_of_range {
public:
    OutOfTableRange(double h, double lo, double hi)
        : std::out_of_range("SER table queried at h=" + std::to_string(h) + " outside knot range [" +
                            std::to_string(lo) + ", " + std::to_string(hi) + "]"),
          h_(h), lo_(lo), hi_(hi) {}
    [[nodiscard]] double h() const noexcept { return h_; }
    [[nodiscard]] double lo() const noexcept { return lo_; }
    [[nodiscard]] double hi() const noexcept { return hi_; }

private:
    double h_, lo_, hi_;
};

/// A quantity is mathematically undefined at the requested point (e.g. ICPE at zero capacity).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UndefinedIcpe : public NumericalError {
public:
    UndefinedIcpe() : NumericalError("undefined ICPE: spectral efficiency is zero at this point") {}
};

/// Link budget cannot close even at the reference distance.
class NoCoverage : public DomainError {
public:
    using DomainError::DomainError;
};

/// Feedback taps do not generate a maximal-length sequence.
class NonPrimitivePolynomial : public DomainError {
public:
    NonPrimitivePolynomial(int degree, std::uint64_t polynomial, std::uint64_t period)
        : DomainError("polynomial 0x" + to_hex(polynomial) + " of degree " + std::to_string(degree) +
                      " is not primitive: measured period " + std::to_string(period) + " != " +
                      std::to_string((std::uint64_t{1} << degree) - 1)),
          period_(period) {}
    [[nodiscard]] std::uint64_t measured_period() const noexcept { return period_; }

private:
    static std::string to_hex(std::uint64_t v) {
        static constexpr char digits[] = "0123456789abcdef";
        std::string s;
        do {
            s.insert(s.begin(), digits[v & 0xF]);
            v >>= 4;
        } while (v != 0);
        return s;
    }
    std::uint64_t period_;
};

/// Identifier requests cannot fit in the 2^n - 1 window space.
class Oversubscribed : public DomainError {
public:
    using DomainError::DomainError;
};

}  // namespace invcrit
