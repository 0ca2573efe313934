#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace sderk {

/// Counter-based, splittable random stream.
///
/// The generator is splitmix64 run in counter mode: draw k of a stream with
/// key K is mix64(K + (k+1)*GAMMA), where mix64 is the splitmix64 finalizer.
/// Two consequences matter here:
///   - a draw depends only on (key, counter), never on what other streams
///     did, so results are independent of thread schedule;
///   - child streams are derived by pure key mixing, so realization i of an
///     experiment owns the same streams no matter how many realizations run
///     or in which order.
///
/// Stream layout used throughout the library:
///   root(master_seed).child(i)             -> realization i
///   realization.child(kWienerChild)        -> Wiener increments
///   realization.child(kSignChild)          -> Rademacher signs
///
/// Gaussian variates use the Box-Muller cosine branch on (0,1] uniforms;
/// each variate consumes exactly two 64-bit draws. This choice is part of
/// the reproducibility contract and must not change within a release.
class RngStream {
public:
    static RngStream from_seed(std::uint64_t seed) {
        return RngStream(mix64(seed ^ 0x5eed5eed5eed5eedULL));
    }

    /// Derive an independent child stream; pure, does not advance this stream.
    RngStream child(std::uint64_t index) const {
        return RngStream(mix64(key_ + 0x9e3779b97f4a7c15ULL * (index + 1)) ^ mix64(~key_));
    }

    std::uint64_t next_u64() {
        counter_ += 1;
        return mix64(key_ + counter_ * 0x9e3779b97f4a7c15ULL);
    }

    /// Uniform on (0, 1]: top 53 bits, shifted away from zero so that
    /// log(next_uniform()) is always finite.
    double next_uniform() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    /// Standard normal variate (Box-Muller, cosine branch).
    double next_gaussian() {
        const double u1 = next_uniform();
        const double u2 = next_uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    /// Rademacher draw: +1 or -1 with equal probability.
    double next_sign() {
        return (next_u64() >> 63) ? 1.0 : -1.0;
    }

    std::uint64_t key() const noexcept { return key_; }

private:
    explicit RngStream(std::uint64_t key) : key_(key) {}

    static std::uint64_t mix64(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ULL;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebULL;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

// Child indices of a realization stream.
inline constexpr std::uint64_t kWienerChild = 0;
inline constexpr std::uint64_t kSignChild = 1;

}  // namespace sderk
