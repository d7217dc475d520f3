#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace hnpf {

/// Seeded random stream with platform-independent output.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The standard <random> distributions are not (libstdc++, libc++
/// and MSVC disagree), so every derived draw below is implemented here from
/// raw 64-bit words:
///   uniform()     top 53 bits scaled by 2^-53, in [0, 1)
///   below(n)      Lemire's multiply-shift with rejection, unbiased
///   binomial(t,p) sum of t Bernoulli(p) draws (t is small for our use)
///   shuffle       Fisher-Yates from the back using below()
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    std::uint64_t below(std::uint64_t n);

    int binomial(int trials, double p);

    template <typename T>
    void shuffle(std::vector<T> &items)
    {
        for (std::size_t i = items.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

/// Independent stream seed from a run seed and a stream id (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

} // namespace hnpf
