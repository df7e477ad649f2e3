#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "kpn/errors.hpp"

namespace kpn {

/// Deterministic primality test (Miller-Rabin with a base set proven
/// complete for 64-bit integers).
bool is_prime(std::uint64_t n);

/// A validated prime field modulus.
struct Prime {
    explicit Prime(std::uint64_t q);

    /// Smallest prime strictly greater than `bound`.
    static Prime smallest_greater_than(std::uint64_t bound);

    std::uint64_t value;

    friend bool operator==(const Prime& a, const Prime& b) { return a.value == b.value; }
};

/// Arithmetic in Z_q. Residues are plain uint64_t kept canonical in [0, q);
/// every operation reduces eagerly.
class Field {
public:
    explicit Field(Prime modulus) : q_(modulus.value) {}

    std::uint64_t q() const { return q_; }

    std::uint64_t reduce(std::uint64_t a) const { return a % q_; }

    std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
        std::uint64_t s = a + b; // q < 2^63, no overflow for canonical inputs
        return s >= q_ ? s - q_ : s;
    }

    std::uint64_t sub(std::uint64_t a, std::uint64_t b) const {
        return a >= b ? a - b : a + q_ - b;
    }

    std::uint64_t neg(std::uint64_t a) const { return a == 0 ? 0 : q_ - a; }

    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
        return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % q_);
    }

    std::uint64_t pow(std::uint64_t base, std::uint64_t exp) const;

    /// Multiplicative inverse via Fermat; throws InvalidParameter on zero.
    std::uint64_t inv(std::uint64_t a) const;

    bool is_canonical(std::uint64_t a) const { return a < q_; }

private:
    std::uint64_t q_;
};

/// Polynomial over Z_q, coefficient i belongs to x^i. The vector length is
/// the declared degree bound + 1; trailing zero coefficients are permitted.
struct Polynomial {
    Polynomial(std::vector<std::uint64_t> coefficients, Prime modulus);

    /// Horner evaluation at a canonical residue.
    std::uint64_t eval(std::uint64_t x) const;

    std::size_t degree_bound() const { return coeffs.size() - 1; }

    std::vector<std::uint64_t> coeffs;
    Prime modulus;
};

/// Value of the unique polynomial of degree <= points.size()-1 through the
/// given points, evaluated at zero. Abscissae must be distinct and nonzero.
std::uint64_t interpolate_at_zero(std::span<const std::pair<std::uint64_t, std::uint64_t>> points,
                                  Prime modulus);

/// The project-wide deterministic generator. Dealing is a pure function of
/// (secret, seed) through this type; mt19937_64 output is pinned by the
/// C++ standard, so test vectors are portable.
using Rng = std::mt19937_64;

/// Uniform residue in [0, q) by rejection sampling; zero modulo bias.
std::uint64_t sample_uniform(Rng& rng, Prime modulus);

} // namespace kpn
