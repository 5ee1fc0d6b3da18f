#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace badgeproc {

// Mixes a root seed with a stream id so that parallel loops can hand every
// work item its own independent generator.
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream) {
    std::uint64_t x = root + 0x9e3779b97f4a7c15ULL * (stream + 1);
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Seeded generator. All variates are derived from raw mt19937_64 output with
// hand-rolled transforms, so a given seed produces the same stream on every
// platform (std::*_distribution implementations vary between standard
// libraries).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // uniform in [0, 1)
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    // uniform in (0, 1), safe to pass to log
    double uniform_pos() {
        return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform();
    }

    double exponential(double rate) {
        if (!(rate > 0.0)) {
            throw std::invalid_argument("Rng::exponential: rate must be positive");
        }
        return -std::log(uniform_pos()) / rate;
    }

    double normal() {
        const double u1 = uniform_pos();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

    // Unit-scale gamma variate, Marsaglia-Tsang squeeze; shapes below one are
    // boosted through gamma(shape + 1) * U^(1/shape).
    double gamma(double shape) {
        if (!(shape > 0.0)) {
            throw std::invalid_argument("Rng::gamma: shape must be positive");
        }
        if (shape < 1.0) {
            const double u = uniform_pos();
            return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        while (true) {
            double x;
            double v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform_pos();
            if (u < 1.0 - 0.0331 * x * x * x * x) {
                return d * v;
            }
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) {
                return d * v;
            }
        }
    }

    // Symmetric Dirichlet over k categories.
    std::vector<double> dirichlet(std::size_t k, double concentration) {
        if (k == 0) {
            throw std::invalid_argument("Rng::dirichlet: k must be positive");
        }
        std::vector<double> out(k);
        double total = 0.0;
        for (double& v : out) {
            v = gamma(concentration);
            total += v;
        }
        if (!(total > 0.0)) {
            // all draws underflowed; fall back to a uniform simplex point
            for (double& v : out) v = 1.0 / static_cast<double>(k);
            return out;
        }
        for (double& v : out) v /= total;
        return out;
    }

    // Index drawn proportionally to nonnegative weights.
    std::size_t categorical(std::span<const double> weights) {
        double total = 0.0;
        for (double w : weights) {
            if (w < 0.0 || !std::isfinite(w)) {
                throw std::invalid_argument("Rng::categorical: weights must be finite and nonnegative");
            }
            total += w;
        }
        if (!(total > 0.0)) {
            throw std::invalid_argument("Rng::categorical: total weight must be positive");
        }
        const double r = uniform() * total;
        double acc = 0.0;
        std::size_t last_positive = 0;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            if (weights[i] > 0.0) last_positive = i;
            acc += weights[i];
            if (r < acc) return i;
        }
        return last_positive;
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace badgeproc
