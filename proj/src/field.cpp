#include "kpn/field.hpp"

#include <algorithm>
#include <string>

namespace kpn {

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
    std::uint64_t result = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1) result = mulmod(result, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return result;
}

} // namespace

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    // This base set decides primality for every n < 2^64 (Sorenson & Webster).
    for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 0; i < r - 1; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

Prime::Prime(std::uint64_t q) : value(q) {
    if (!is_prime(q)) {
        throw InvalidParameter("modulus " + std::to_string(q) + " is not prime");
    }
}

Prime Prime::smallest_greater_than(std::uint64_t bound) {
    std::uint64_t candidate = bound + 1;
    while (!is_prime(candidate)) ++candidate;
    return Prime(candidate);
}

std::uint64_t Field::pow(std::uint64_t base, std::uint64_t exp) const {
    return powmod(base, exp, q_);
}

std::uint64_t Field::inv(std::uint64_t a) const {
    if (a == 0) throw InvalidParameter("inverse of zero");
    return pow(a, q_ - 2);
}

Polynomial::Polynomial(std::vector<std::uint64_t> coefficients, Prime mod)
    : coeffs(std::move(coefficients)), modulus(mod) {
    if (coeffs.empty()) throw InvalidParameter("polynomial needs at least one coefficient");
    for (std::uint64_t c : coeffs) {
        if (c >= modulus.value) {
            throw InvalidParameter("polynomial coefficient " + std::to_string(c) +
                                   " not canonical mod " + std::to_string(modulus.value));
        }
    }
}

std::uint64_t Polynomial::eval(std::uint64_t x) const {
    Field f(modulus);
    if (!f.is_canonical(x)) {
        throw InvalidParameter("evaluation point " + std::to_string(x) + " not canonical");
    }
    std::uint64_t acc = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        acc = f.add(f.mul(acc, x), *it);
    }
    return acc;
}

std::uint64_t interpolate_at_zero(std::span<const std::pair<std::uint64_t, std::uint64_t>> points,
                                  Prime modulus) {
    if (points.empty()) throw InvalidParameter("interpolation needs at least one point");
    Field f(modulus);
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!f.is_canonical(points[i].first) || !f.is_canonical(points[i].second)) {
            throw InvalidParameter("interpolation point not canonical");
        }
        if (points[i].first == 0) {
            throw InvalidParameter("interpolation abscissa must be nonzero");
        }
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            if (points[i].first == points[j].first) {
                throw DegenerateInterpolation("duplicate abscissa " +
                                              std::to_string(points[i].first));
            }
        }
    }
    // f(0) = sum_i y_i * prod_{j!=i} x_j / (x_j - x_i)
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        std::uint64_t num = 1;
        std::uint64_t den = 1;
        for (std::size_t j = 0; j < points.size(); ++j) {
            if (j == i) continue;
            num = f.mul(num, points[j].first);
            den = f.mul(den, f.sub(points[j].first, points[i].first));
        }
        acc = f.add(acc, f.mul(points[i].second, f.mul(num, f.inv(den))));
    }
    return acc;
}

std::uint64_t sample_uniform(Rng& rng, Prime modulus) {
    const std::uint64_t q = modulus.value;
    // Largest multiple of q representable in 64 bits; draws at or above it
    // are rejected so every residue keeps probability exactly 1/q.
    const std::uint64_t limit = (UINT64_MAX / q) * q;
    std::uint64_t draw;
    do {
        draw = rng();
    } while (draw >= limit);
    return draw % q;
}

} // namespace kpn
