#pragma once

#include <cstdint>

#include "fiskit/field.hpp"

namespace fiskit {

/// Seeded 64-bit generator (splitmix64) with hand-rolled uniform and normal
/// draws so that streams are identical across platforms and library versions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0,1).
    double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }
    /// Uniform in [lo,hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Standard normal via Box-Muller.
    double normal();
    cplx cnormal() { return {normal(), normal()}; }
    /// Integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Random trigonometric polynomial with modes |k_a| <= kmax per axis and
/// complex normal coefficients. When real is set the field is real-valued.
ScalarField band_limited_field(const ChartPtr& chart, int kmax, Rng& rng, bool real = false);

} // namespace fiskit
