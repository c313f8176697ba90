#pragma once

// Seeded random source with a fully specified output sequence.
//
// Engine: std::mt19937_64, whose output sequence the C++ standard fixes.
// Uniforms: the top 53 bits of one engine draw, scaled into [0, 1).
// Normals: Marsaglia's polar method on uniforms mapped to (-1, 1); both
// variates of an accepted pair are used, the second one cached.
// std::normal_distribution is avoided because its algorithm differs between
// standard libraries.

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>

#include "mar/linalg.hpp"

namespace mar {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double normal() {
        if (cached_) {
            double z = *cached_;
            cached_.reset();
            return z;
        }
        double u = 0.0, v = 0.0, s = 0.0;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        cached_ = v * f;
        return u * f;
    }

    double exponential() { return -std::log1p(-uniform()); }

    /// Matrix of iid standard normals, filled in column-major order.
    Mat normal_matrix(Index rows, Index cols) {
        Mat out(rows, cols);
        for (Index k = 0; k < out.size(); ++k) out.data()[k] = normal();
        return out;
    }

private:
    std::mt19937_64 engine_;
    std::optional<double> cached_;
};

} // namespace mar
