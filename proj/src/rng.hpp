#pragma once

#include <cstdint>
#include <random>

namespace ncm {

// Deterministic across platforms: raw mt19937_64 draws mapped to doubles
// directly (distribution classes are implementation-defined).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform01() { return double(eng_() >> 11) * 0x1.0p-53; }
    double symmetric() { return 2.0 * uniform01() - 1.0; } // [-1, 1)
    std::uint64_t raw() { return eng_(); }

private:
    std::mt19937_64 eng_;
};

} // namespace ncm
