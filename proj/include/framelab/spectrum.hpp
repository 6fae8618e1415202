#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "common.hpp"

namespace framelab {

/// Finite candidate spectrum: strictly increasing frequencies inside a
/// half-open truncation window [lo, hi). The window matters: counting
/// densities are only meaningful relative to it.
struct Spectrum {
    std::vector<double> points;  // strictly increasing
    Interval window;
    std::string provenance;
    std::uint64_t seed = 0;

    std::size_t size() const { return points.size(); }
};

namespace detail {

inline Spectrum finish_spectrum(std::vector<double> pts, Interval window, std::string provenance,
                                std::uint64_t seed) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    for (double p : pts) {
        require(window.contains(p), "PointOutsideWindow",
                "frequency " + format_double(p) + " outside window [" +
                    format_double(window.lo) + "," + format_double(window.hi) + ")");
    }
    Spectrum s;
    s.points = std::move(pts);
    s.window = window;
    s.provenance = std::move(provenance);
    s.seed = seed;
    return s;
}

}  // namespace detail

inline Spectrum make_spectrum(std::vector<double> pts, Interval window,
                              std::string provenance = "explicit", std::uint64_t seed = 0) {
    return detail::finish_spectrum(std::move(pts), window, std::move(provenance), seed);
}

/// {alpha k + offset : k integer} clipped to the half-open window.
inline Spectrum lattice(double alpha, double offset, Interval window) {
    require(alpha > 0.0, "BadSpacing", "lattice spacing must be positive");
    require(!window.empty(), "EmptyWindow", "window is empty");
    long k_lo = static_cast<long>(std::ceil((window.lo - offset) / alpha - 1e-9));
    long k_hi = static_cast<long>(std::floor((window.hi - offset) / alpha + 1e-9));
    std::vector<double> pts;
    pts.reserve(static_cast<std::size_t>(std::max(0L, k_hi - k_lo + 1)));
    for (long k = k_lo; k <= k_hi; ++k) {
        double p = alpha * static_cast<double>(k) + offset;
        if (p >= window.lo && p < window.hi) pts.push_back(p);
    }
    return detail::finish_spectrum(std::move(pts), window,
                                   "lattice(" + format_double(alpha) + "," +
                                       format_double(offset) + ")",
                                   0);
}

/// Lattice with an independent uniform jitter in [-max_jitter, max_jitter]
/// per point, derived deterministically from (seed, lattice index). Jitter is
/// clipped at the window edges so the point count matches the clean lattice.
/// max_jitter < alpha/2 keeps one point per lattice cell and preserves order.
inline Spectrum jittered_lattice(double alpha, double max_jitter, std::uint64_t seed,
                                 Interval window, double offset = 0.0) {
    require(alpha > 0.0, "BadSpacing", "lattice spacing must be positive");
    require(max_jitter >= 0.0 && max_jitter < alpha / 2.0, "JitterTooLarge",
            "max_jitter must lie in [0, alpha/2), got " + format_double(max_jitter));
    require(!window.empty(), "EmptyWindow", "window is empty");
    long k_lo = static_cast<long>(std::ceil((window.lo - offset) / alpha - 1e-9));
    long k_hi = static_cast<long>(std::floor((window.hi - offset) / alpha + 1e-9));
    std::vector<double> pts;
    double window_top = std::nextafter(window.hi, window.lo);
    for (long k = k_lo; k <= k_hi; ++k) {
        double base = alpha * static_cast<double>(k) + offset;
        if (!(base >= window.lo && base < window.hi)) continue;
        SplitMix64 rng = substream(seed, static_cast<std::uint64_t>(k));
        double u = rng.next_in(-max_jitter, max_jitter);
        double p = std::clamp(base + u, window.lo, window_top);
        pts.push_back(p);
    }
    return detail::finish_spectrum(std::move(pts), window,
                                   "jitter(" + format_double(alpha) + "," +
                                       format_double(max_jitter) + ",seed=" +
                                       std::to_string(seed) + ")",
                                   seed);
}

/// Union of two spectra; exact duplicates collapse to one point.
inline Spectrum union_spectrum(const Spectrum& a, const Spectrum& b) {
    std::vector<double> pts = a.points;
    pts.insert(pts.end(), b.points.begin(), b.points.end());
    Interval window{std::min(a.window.lo, b.window.lo), std::max(a.window.hi, b.window.hi)};
    return detail::finish_spectrum(std::move(pts), window,
                                   "union(" + a.provenance + ";" + b.provenance + ")", a.seed);
}

/// Upper/lower Beurling density estimates from sliding half-open windows
/// Q_h(x) = [x - h/2, x + h/2), restricted to positions where Q_h(x) lies
/// inside the truncation window. Counts are normalized by h; the estimates
/// D+ and D- are read off at the largest h.
struct DensityCounts {
    std::vector<double> h_values;
    std::vector<double> sup_counts;  // max count / h, per h
    std::vector<double> inf_counts;  // min count / h, per h
    double d_plus_est = 0.0;
    double d_minus_est = 0.0;
    double separation_delta = inf;  // minimal consecutive gap of the input set
};

inline DensityCounts beurling_density(const Spectrum& s, std::vector<double> h_values,
                                      double x_step_factor = 0.1) {
    require(x_step_factor > 0.0 && x_step_factor <= 0.25, "BadStepFactor",
            "x step factor must lie in (0, 1/4]");
    require(!h_values.empty(), "BadWindowList", "need at least one window size");
    const double width = s.window.length();
    DensityCounts out;
    std::sort(h_values.begin(), h_values.end());
    for (double h : h_values) {
        require(h > 0.0 && h <= width / 2.0, "WindowTooSmall",
                "window size h = " + format_double(h) +
                    " must be positive and at most half the truncation width " +
                    format_double(width));
        double x_lo = s.window.lo + h / 2.0;
        double x_hi = s.window.hi - h / 2.0;
        double step = h * x_step_factor;
        std::size_t max_count = 0;
        std::size_t min_count = std::numeric_limits<std::size_t>::max();
        auto count_at = [&](double x) {
            auto lo = std::lower_bound(s.points.begin(), s.points.end(), x - h / 2.0);
            auto hi = std::lower_bound(s.points.begin(), s.points.end(), x + h / 2.0);
            std::size_t c = static_cast<std::size_t>(hi - lo);
            max_count = std::max(max_count, c);
            min_count = std::min(min_count, c);
        };
        for (double x = x_lo; x <= x_hi; x += step) count_at(x);
        count_at(x_hi);  // always include the right-aligned position
        out.h_values.push_back(h);
        out.sup_counts.push_back(static_cast<double>(max_count) / h);
        out.inf_counts.push_back(min_count == std::numeric_limits<std::size_t>::max()
                                     ? 0.0
                                     : static_cast<double>(min_count) / h);
    }
    out.d_plus_est = out.sup_counts.back();
    out.d_minus_est = out.inf_counts.back();
    for (std::size_t i = 1; i < s.points.size(); ++i)
        out.separation_delta = std::min(out.separation_delta, s.points[i] - s.points[i - 1]);
    return out;
}

/// Minimal gap plus a greedy sufficient check for "union of k separated
/// sets": points are assigned best-fit to k bins that must each keep
/// consecutive gaps >= target_gap. Greedy success proves decomposability;
/// greedy failure is only evidence, not a proof of impossibility.
struct SeparationReport {
    double delta = inf;  // minimal consecutive gap
    double target_gap = 1.0;
    std::map<int, bool> union_of_k;
};

inline SeparationReport separation(const Spectrum& s, double target_gap = 1.0, int k_max = 4) {
    require(target_gap > 0.0, "BadGap", "separation target gap must be positive");
    SeparationReport rep;
    rep.target_gap = target_gap;
    for (std::size_t i = 1; i < s.points.size(); ++i)
        rep.delta = std::min(rep.delta, s.points[i] - s.points[i - 1]);
    for (int k = 1; k <= k_max; ++k) {
        std::vector<double> last(static_cast<std::size_t>(k), -inf);
        bool ok = true;
        for (double x : s.points) {
            int best = -1;
            for (int j = 0; j < k; ++j) {
                if (x - last[static_cast<std::size_t>(j)] >= target_gap - 1e-12) {
                    if (best < 0 || last[static_cast<std::size_t>(j)] >
                                        last[static_cast<std::size_t>(best)]) {
                        best = j;
                    }
                }
            }
            if (best < 0) {
                ok = false;
                break;
            }
            last[static_cast<std::size_t>(best)] = x;
        }
        rep.union_of_k[k] = ok;
    }
    return rep;
}

/// One point per cell gamma + [-L/2, L/2) for gamma in L*Z with the cell
/// center inside the window: the leftmost spectrum point of each cell.
/// Throws EmptyCell naming the first deserted cell.
inline Spectrum cube_selector(const Spectrum& s, double L) {
    require(L > 0.0, "BadSpacing", "cell size must be positive");
    long k_lo = static_cast<long>(std::ceil(s.window.lo / L - 1e-9));
    long k_hi = static_cast<long>(std::floor(s.window.hi / L + 1e-9));
    std::vector<double> pts;
    for (long k = k_lo; k <= k_hi; ++k) {
        double gamma = L * static_cast<double>(k);
        if (!(gamma >= s.window.lo && gamma < s.window.hi)) continue;
        auto lo = std::lower_bound(s.points.begin(), s.points.end(), gamma - L / 2.0);
        if (lo == s.points.end() || *lo >= gamma + L / 2.0) {
            raise("EmptyCell", "no spectrum point in cell centered at gamma = " +
                                   format_double(gamma));
        }
        pts.push_back(*lo);
    }
    return detail::finish_spectrum(std::move(pts), s.window,
                                   "cube_selector(" + s.provenance + ",L=" + format_double(L) + ")",
                                   s.seed);
}

/// Largest epsilon for which the one-point-per-cell construction certifies a
/// frame on [-eps/2, eps/2): both products
///   g(eps) = (e^{1/4} - 1)(e^{4 pi^2 eps^2} - 1)        and  sqrt(B) g(eps)
/// must stay at or below 1/2 - margin. Found by bisection to 1e-9.
struct EpsilonReport {
    double epsilon = 0.0;
    double g_value = 0.0;          // g(epsilon)
    double scaled_value = 0.0;     // sqrt(B) g(epsilon)
    double bound = 0.0;            // 1/2 - margin
    double bessel_bound = 1.0;
    double margin = 0.0;
    int iterations = 0;
};

inline EpsilonReport epsilon_for_frame(double bessel_bound, double margin = 1e-3) {
    require(bessel_bound >= 1.0, "BadBesselBound", "Bessel bound must be at least 1");
    require(margin >= 0.0, "BadMargin", "margin must be nonnegative");
    double bound = 0.5 - margin;
    require(bound > 0.0, "NoPositiveEpsilon", "margin leaves no room below 1/2");
    const double c0 = std::expm1(0.25);  // e^{1/4} - 1
    const double root_b = std::sqrt(bessel_bound);
    auto worst = [&](double eps) {
        double g = c0 * std::expm1(4.0 * pi * pi * eps * eps);
        return std::max(g, root_b * g);
    };
    double lo = 0.0, hi = 1.0;
    require(worst(hi) > bound, "NoPositiveEpsilon", "no finite bracket for epsilon");
    EpsilonReport rep;
    rep.bessel_bound = bessel_bound;
    rep.margin = margin;
    rep.bound = bound;
    while (hi - lo > 1e-9) {
        double mid = 0.5 * (lo + hi);
        if (worst(mid) <= bound) {
            lo = mid;
        } else {
            hi = mid;
        }
        ++rep.iterations;
    }
    rep.epsilon = lo;
    rep.g_value = c0 * std::expm1(4.0 * pi * pi * lo * lo);
    rep.scaled_value = root_b * rep.g_value;
    return rep;
}

}  // namespace framelab
