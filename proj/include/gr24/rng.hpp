#pragma once

#include <cmath>
#include <cstdint>

namespace gr24 {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

} // namespace detail

/// Counter-based random stream: output i is a pure function of (key, i), so a
/// stream can be split into independent substreams and replayed exactly.
/// Identical seed + parameters give a bit-identical sequence on one platform.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed)
        : key_(detail::splitmix64(detail::splitmix64(seed) ^ 0x517cc1b727220a95ull)) {}

    /// Independent stream derived from this one; safe to use concurrently
    /// with the parent and with other substream indices.
    RandomStream substream(std::uint64_t index) const {
        RandomStream s(0);
        s.key_ = detail::splitmix64(key_ ^ detail::splitmix64(index ^ 0xd1b54a32d192ed03ull));
        s.counter_ = 0;
        s.have_gauss_ = false;
        return s;
    }

    std::uint64_t next_u64() { return detail::splitmix64(key_ + 0x9e3779b97f4a7c15ull * ++counter_); }

    /// Uniform double in [0, 1).
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller; pairs are cached.
    double next_gaussian() {
        if (have_gauss_) {
            have_gauss_ = false;
            return gauss_;
        }
        // u in (0,1] so that log(u) is finite
        double u = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
        double v = next_double();
        double r = std::sqrt(-2.0 * std::log(u));
        double a = 6.283185307179586476925286766559 * v;
        gauss_ = r * std::sin(a);
        have_gauss_ = true;
        return r * std::cos(a);
    }

private:
    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
    double gauss_ = 0.0;
    bool have_gauss_ = false;
};

} // namespace gr24
