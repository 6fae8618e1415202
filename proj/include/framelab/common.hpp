#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace framelab {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr double inf = std::numeric_limits<double>::infinity();

/// Library-wide exception. `code` is a short stable identifier suitable for
/// matching in tests and CLI error reporting; `what()` carries the details.
class error : public std::runtime_error {
public:
    error(std::string code, const std::string& message)
        : std::runtime_error(code + ": " + message), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

[[noreturn]] inline void raise(const std::string& code, const std::string& message) {
    throw error(code, message);
}

inline void require(bool cond, const std::string& code, const std::string& message) {
    if (!cond) raise(code, message);
}

/// Half-open interval [lo, hi). Degenerate (lo >= hi) intervals are empty.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const { return hi > lo ? hi - lo : 0.0; }
    bool empty() const { return !(lo < hi); }
    bool contains(double x) const { return x >= lo && x < hi; }

    Interval clipped_to(const Interval& other) const {
        return {std::max(lo, other.lo), std::min(hi, other.hi)};
    }

    Interval translated(double t) const { return {lo + t, hi + t}; }
};

/// Length of the overlap between two half-open intervals.
inline double overlap_length(const Interval& a, const Interval& b) {
    double lo = std::max(a.lo, b.lo);
    double hi = std::min(a.hi, b.hi);
    return hi > lo ? hi - lo : 0.0;
}

/// SplitMix64: tiny deterministic generator with a portable output sequence.
/// Used everywhere randomness is needed so identical seeds give identical
/// results on every platform (std:: distributions are implementation-defined).
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double next_in(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

    /// Uniform integer in [0, n).
    std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

private:
    std::uint64_t state_;
};

/// Derives an independent substream from (seed, index). Two distinct indices
/// give streams that never track each other, which keeps per-point jitter and
/// per-sample digit draws stable under reordering or batching.
inline SplitMix64 substream(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 mixer(seed ^ (0x517cc1b727220a95ULL * (index + 1)));
    return SplitMix64(mixer.next_u64());
}

/// e^{2*pi*i*turns} with argument reduction done in turns, so large arguments
/// lose no more precision than the turns value itself carries.
inline cplx cis_turns(double turns) {
    double r = turns - std::nearbyint(turns);
    double a = two_pi * r;
    return {std::cos(a), std::sin(a)};
}

/// sin(x)/x with the removable singularity filled in.
inline double sinc(double x) {
    if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

/// Shortest round-trip decimal form of a double. Keeps CSV and JSON output
/// byte-identical across runs and platforms.
inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline bool nearly_equal(double a, double b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace framelab
