/**
 * @file msequence.hpp
 * @brief Maximal-length (m-)sequences from primitive feedback polynomials.
 *
 * Polynomials are bit masks: bit k is the coefficient of x^k, so x^3 + x + 1
 * is 0b1011. The generator is a Fibonacci register running the recurrence
 * a[k+n] = sum_{i<n} c_i·a[k+i] (mod 2).
 */
#pragma once

#include "invcrit/errors.hpp"

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

namespace invcrit {

namespace gf2 {

/// (a·b) mod f over GF(2); degrees below 32.
constexpr std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t f, int degree) noexcept {
    std::uint64_t r = 0;
    const std::uint64_t top = std::uint64_t{1} << degree;
    while (b != 0) {
        if (b & 1u) r ^= a;
        b >>= 1;
        a <<= 1;
        if (a & top) a ^= f;
    }
    return r;
}

constexpr std::uint64_t powmod_x(std::uint64_t e, std::uint64_t f, int degree) noexcept {
    std::uint64_t result = 1;
    std::uint64_t base = 2;  // x
    if (degree == 1) base = 1;
    while (e != 0) {
        if (e & 1u) result = mulmod(result, base, f, degree);
        base = mulmod(base, base, f, degree);
        e >>= 1;
    }
    return result;
}

inline std::vector<std::uint64_t> prime_factors(std::uint64_t v) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t p = 2; p * p <= v; ++p) {
        if (v % p == 0) {
            out.push_back(p);
            while (v % p == 0) v /= p;
        }
    }
    if (v > 1) out.push_back(v);
    return out;
}

/// True when x has multiplicative order 2^n - 1 modulo f, i.e. f is primitive.
inline bool is_primitive(std::uint64_t poly, int degree) {
    if (degree < 2 || degree > 31) return false;
    if ((poly >> degree) != 1u || (poly & 1u) == 0) return false;
    const std::uint64_t order = (std::uint64_t{1} << degree) - 1;
    if (powmod_x(order, poly, degree) != 1) return false;
    for (std::uint64_t q : prime_factors(order))
        if (powmod_x(order / q, poly, degree) == 1) return false;
    return true;
}

}  // namespace gf2

/// The first `count` primitive polynomials of the given degree in ascending mask order.
inline std::vector<std::uint64_t> primitive_polynomials(int degree, std::size_t count) {
    if (degree < 2 || degree > 31) throw DomainError("m-sequence degree must be in [2, 31]");
    std::vector<std::uint64_t> out;
    const std::uint64_t start = (std::uint64_t{1} << degree) | 1u;
    const std::uint64_t stop = std::uint64_t{1} << (degree + 1);
    for (std::uint64_t f = start; f < stop && out.size() < count; f += 2)
        if (gf2::is_primitive(f, degree)) out.push_back(f);
    if (out.size() < count) throw DomainError("not enough primitive polynomials of this degree");
    return out;
}

inline std::uint64_t default_primitive_polynomial(int degree) { return primitive_polynomials(degree, 1).front(); }

class MSequence {
public:
    static constexpr int min_degree = 2;
    static constexpr int max_degree = 24;

    /// Runs the register one full cycle; rejects taps whose period is short of 2^n - 1.
    static MSequence generate(int degree, std::uint64_t polynomial) {
        if (degree < min_degree || degree > max_degree) throw DomainError("m-sequence degree must be in [2, 24]");
        if ((polynomial >> degree) != 1u) throw DomainError("polynomial degree does not match n");
        if ((polynomial & 1u) == 0) throw DomainError("polynomial needs a constant term (singular register)");
        const std::uint64_t full = (std::uint64_t{1} << degree) - 1;
        const std::uint64_t feedback = polynomial & full;
        const std::uint64_t initial = std::uint64_t{1} << (degree - 1);

        MSequence seq;
        seq.degree_ = degree;
        seq.polynomial_ = polynomial;
        seq.bits_.reserve(static_cast<std::size_t>(full));
        std::uint64_t state = initial;
        std::uint64_t steps = 0;
        do {
            seq.bits_.push_back(static_cast<std::uint8_t>(state & 1u));
            const auto next = static_cast<std::uint64_t>(std::popcount(state & feedback) & 1);
            state = (state >> 1) | (next << (degree - 1));
            ++steps;
        } while (state != initial && steps <= full);
        if (steps != full) throw NonPrimitivePolynomial(degree, polynomial, steps);

        seq.chips_.resize(seq.bits_.size());
        for (std::size_t k = 0; k < seq.bits_.size(); ++k) seq.chips_[k] = seq.bits_[k] ? -1.0 : 1.0;
        return seq;
    }

    static MSequence generate(int degree) { return generate(degree, default_primitive_polynomial(degree)); }

    [[nodiscard]] int degree() const noexcept { return degree_; }
    [[nodiscard]] std::uint64_t polynomial() const noexcept { return polynomial_; }
    [[nodiscard]] std::size_t period() const noexcept { return bits_.size(); }
    [[nodiscard]] std::span<const std::uint8_t> bits() const noexcept { return bits_; }
    /// ±1 chips: bit 0 -> +1, bit 1 -> -1.
    [[nodiscard]] std::span<const double> chips() const noexcept { return chips_; }

    /// n-bit window A_j = a[j-(n-1)] ... a[j] (indices mod period), a[j] in the low bit.
    [[nodiscard]] std::uint32_t window(std::size_t j) const noexcept {
        const std::size_t n = static_cast<std::size_t>(degree_);
        const std::size_t period = bits_.size();
        std::uint32_t w = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t idx = (j + period * n - (n - 1) + i) % period;
            w = (w << 1) | bits_[idx];
        }
        return w;
    }

    [[nodiscard]] long chip_sum() const noexcept {
        long s = 0;
        for (auto b : bits_) s += b ? -1 : 1;
        return s;
    }

private:
    MSequence() = default;

    int degree_ = 0;
    std::uint64_t polynomial_ = 0;
    std::vector<std::uint8_t> bits_;
    std::vector<double> chips_;
};

namespace detail {

/// Bits packed LSB-first into 64-bit words, stored twice so any rotation is a contiguous read.
class DoubledBits {
public:
    explicit DoubledBits(std::span<const std::uint8_t> bits) : n_(bits.size()), words_((2 * n_ + 127) / 64 + 1, 0) {
        for (std::size_t k = 0; k < 2 * n_; ++k)
            if (bits[k % n_]) words_[k / 64] |= std::uint64_t{1} << (k % 64);
    }

    /// 64 bits starting at bit offset `pos`.
    [[nodiscard]] std::uint64_t read(std::size_t pos) const noexcept {
        const std::size_t w = pos / 64;
        const unsigned s = static_cast<unsigned>(pos % 64);
        if (s == 0) return words_[w];
        return (words_[w] >> s) | (words_[w + 1] << (64 - s));
    }

    [[nodiscard]] std::size_t size() const noexcept { return n_; }

private:
    std::size_t n_;
    std::vector<std::uint64_t> words_;
};

}  // namespace detail

/**
 * Unnormalized periodic cross-correlation R(τ) = Σ_k a_k·b_{k+τ} of two ±1
 * sequences given as bits, for every lag τ in [0, N). Exact integer arithmetic.
 */
inline std::vector<long> periodic_correlation(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
    if (a.size() != b.size() || a.empty()) throw DomainError("sequences must have equal non-zero length");
    const std::size_t n = a.size();
    const detail::DoubledBits da(a);
    const detail::DoubledBits db(b);
    std::vector<long> out(n);
    const std::size_t full_words = n / 64;
    const std::size_t tail = n % 64;
    const std::uint64_t tail_mask = tail ? (std::uint64_t{1} << tail) - 1 : 0;
    for (std::size_t lag = 0; lag < n; ++lag) {
        long disagree = 0;
        for (std::size_t w = 0; w < full_words; ++w) disagree += std::popcount(da.read(64 * w) ^ db.read(lag + 64 * w));
        if (tail) disagree += std::popcount((da.read(64 * full_words) ^ db.read(lag + 64 * full_words)) & tail_mask);
        out[lag] = static_cast<long>(n) - 2 * disagree;
    }
    return out;
}

inline std::vector<long> periodic_autocorrelation(const MSequence& seq) {
    return periodic_correlation(seq.bits(), seq.bits());
}

}  // namespace invcrit
