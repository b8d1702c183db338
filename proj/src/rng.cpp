#include "subforge/rng.hpp"

#include <algorithm>
#include <stdexcept>

namespace subforge {

namespace {

std::uint64_t splitmix64(std::uint64_t &x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t fnv1a(const std::string &s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

} // namespace

Rng::Rng(std::uint64_t seed, const std::string &tag) {
    std::uint64_t mix = seed ^ fnv1a(tag);
    for (auto &word : s_)
        word = splitmix64(mix);
}

std::uint64_t Rng::next_u64() {
    std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

std::uint64_t Rng::below(std::uint64_t bound) {
    if (bound == 0)
        throw std::invalid_argument("Rng::below: zero bound");
    std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        std::uint64_t r = next_u64();
        if (r >= threshold)
            return r % bound;
    }
}

std::int64_t Rng::range(std::int64_t lo, std::int64_t hi) {
    if (lo > hi)
        throw std::invalid_argument("Rng::range: empty range");
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
}

double Rng::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::vector<int> Rng::sample_without_replacement(int n, int k) {
    if (k < 0 || k > n)
        throw std::invalid_argument("Rng::sample_without_replacement: bad k");
    // Floyd's algorithm keeps cost proportional to k.
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(k));
    for (int j = n - k; j < n; ++j) {
        int t = static_cast<int>(below(static_cast<std::uint64_t>(j) + 1));
        if (std::find(out.begin(), out.end(), t) == out.end())
            out.push_back(t);
        else
            out.push_back(j);
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace subforge
