#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace subforge {

/// Deterministic xoshiro256** stream. Every randomized operation owns a
/// stream derived from (seed, op-tag), so concurrent trials and repeated
/// runs are reproducible independent of the standard library.
class Rng {
  public:
    explicit Rng(std::uint64_t seed, const std::string &tag = "");

    std::uint64_t next_u64();

    /// Uniform in [0, bound), bound > 0. Rejection sampling, no modulo bias.
    std::uint64_t below(std::uint64_t bound);

    /// Uniform integer in [lo, hi] inclusive.
    std::int64_t range(std::int64_t lo, std::int64_t hi);

    /// Uniform double in [0, 1).
    double next_double();

    bool bernoulli(double p) { return next_double() < p; }

    /// Fisher-Yates shuffle (deterministic given stream state).
    template <typename T> void shuffle(std::vector<T> &v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    /// k distinct values from [0, n), sorted ascending.
    std::vector<int> sample_without_replacement(int n, int k);

  private:
    std::uint64_t s_[4];
};

} // namespace subforge
