#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace graphon {

/// Seedable generator used for sampling, random kernels and heuristic restarts.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Distributions are derived by hand from the raw 64-bit words (the
/// std:: distributions are implementation-defined), so a given seed yields the
/// same stream on every platform and can be reproduced from another language.
class Rng {
public:
    static constexpr std::string_view algorithm = "mt19937_64;u01=(x>>11)*2^-53;bit=x>>63;int=u01*range";

    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    bool bit() { return (next_u64() >> 63) != 0; }

    /// Uniform integer in [lo, hi].
    std::int64_t integer(std::int64_t lo, std::int64_t hi) {
        const auto range = static_cast<double>(hi - lo + 1);
        auto offset = static_cast<std::int64_t>(uniform() * range);
        if (offset > hi - lo) offset = hi - lo;
        return lo + offset;
    }

private:
    std::mt19937_64 engine_;
};

} // namespace graphon
