#include "sbm/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sbm {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t st = seed;
    std::uint64_t salt = splitmix64(st);
    st = salt ^ (stream * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL);
    for (auto& s : s_) s = splitmix64(st);
    // The all-zero state is the one fixed point of xoshiro; the mix above
    // cannot reach it except by astronomical accident, but guard anyway.
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[3] = 0x9e3779b97f4a7c15ULL;
}

namespace {
inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
}  // namespace

std::uint64_t Rng::next_u64() {
    std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Rng::next_unit() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::next_normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = next_unit();
    double u2 = next_unit();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
}

std::uint64_t Rng::next_below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("next_below: bound must be positive");
    unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * bound;
    return static_cast<std::uint64_t>(m >> 64);
}

long long Rng::next_binomial(long long n, double q) {
    if (n < 0 || !(q >= 0.0 && q <= 1.0))
        throw std::invalid_argument("next_binomial: need n >= 0 and q in [0,1]");
    if (n == 0 || q == 0.0) return 0;
    if (q == 1.0) return n;
    if (static_cast<double>(n) * q > 300.0) {
        long long half = n / 2;
        return next_binomial(half, q) + next_binomial(n - half, q);
    }
    double u = next_unit();
    double ratio = q / (1.0 - q);
    double pk = std::exp(static_cast<double>(n) * std::log1p(-q));
    double cdf = pk;
    long long k = 0;
    while (u > cdf && k < n) {
        pk *= ratio * static_cast<double>(n - k) / static_cast<double>(k + 1);
        ++k;
        cdf += pk;
    }
    return k;
}

}  // namespace sbm
