#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "common.hpp"

namespace framelab {

/// Equal-weight iterated function system on the line:
///   f_j(x) = lambda * x + d_j,  j = 1..l,
/// with the invariant measure satisfying mu(E) = (1/l) sum_j mu(f_j^{-1}(E)).
/// Digits are normalized so 0 = d_1 < d_2 < ... < d_l; the attractor lives in
/// [0, d_max / (1 - lambda)].
struct IFSSystem {
    double lambda = 0.5;
    std::vector<double> digits;
    Interval attractor_hull;

    std::size_t branch_count() const { return digits.size(); }
    double hull_length() const { return attractor_hull.length(); }
};

/// Validates and normalizes an IFS description. Digits are sorted and shifted
/// so the smallest is exactly 0 (translating all digits translates the
/// attractor, nothing else).
inline IFSSystem make_ifs(double lambda, std::vector<double> digits) {
    require(lambda > 0.0 && lambda < 1.0, "BadContraction",
            "contraction ratio must lie in (0,1), got " + format_double(lambda));
    require(digits.size() >= 2, "TooFewDigits",
            "need at least two digits, got " + std::to_string(digits.size()));
    std::sort(digits.begin(), digits.end());
    for (std::size_t i = 1; i < digits.size(); ++i) {
        require(digits[i] != digits[i - 1], "DuplicateDigits",
                "digit " + format_double(digits[i]) + " repeats");
    }
    double base = digits.front();
    for (double& d : digits) d -= base;
    IFSSystem sys;
    sys.lambda = lambda;
    double span = digits.back() / (1.0 - lambda);
    sys.attractor_hull = {0.0, span};
    sys.digits = std::move(digits);
    return sys;
}

/// Bernoulli convolution nu_lambda in the normalization used throughout:
/// digits {0, 1-lambda}, attractor hull [0, 1].
inline IFSSystem make_bernoulli(double lambda) { return make_ifs(lambda, {0.0, 1.0 - lambda}); }

namespace detail {

inline constexpr std::uint64_t kWordCap = std::uint64_t(1) << 22;

/// Number of length-`depth` digit words, guarded against overflow.
inline std::uint64_t word_count(std::size_t branches, int depth) {
    std::uint64_t n = 1;
    for (int i = 0; i < depth; ++i) {
        if (n > kWordCap) return n;
        n *= branches;
    }
    return n;
}

/// Enumerates all digit words of the given depth with a mixed-radix counter,
/// maintaining the prefix sums x_w = sum_j lambda^j d_{w_j} incrementally.
/// Calls visit(left_endpoint) once per word; each word's image of the hull is
/// [left, left + lambda^depth * hull_length).
template <typename Visit>
void for_each_word(const IFSSystem& sys, int depth, Visit&& visit) {
    require(depth >= 0, "BadDepth", "word depth must be nonnegative");
    const std::size_t l = sys.branch_count();
    require(word_count(l, depth) <= kWordCap, "DepthCap",
            "digit-word enumeration at depth " + std::to_string(depth) + " exceeds " +
                std::to_string(kWordCap) + " words");
    if (depth == 0) {
        visit(0.0);
        return;
    }
    std::vector<double> scale(depth);  // lambda^j
    double s = 1.0;
    for (int j = 0; j < depth; ++j) {
        scale[j] = s;
        s *= sys.lambda;
    }
    std::vector<std::size_t> word(depth, 0);
    // prefix[j] = sum_{k < j} lambda^k d_{w_k}; prefix[depth] is the endpoint.
    std::vector<double> prefix(depth + 1, 0.0);
    for (;;) {
        visit(prefix[depth]);
        int j = depth - 1;
        while (j >= 0 && word[j] == l - 1) {
            word[j] = 0;
            --j;
        }
        if (j < 0) break;
        ++word[j];
        for (int k = j; k < depth; ++k) {
            prefix[k + 1] = prefix[k] + scale[k] * sys.digits[word[k]];
        }
    }
}

/// Smallest depth d with lambda^d * hull_length <= resolution, capped so the
/// word count stays enumerable. Returns at least 1.
inline int depth_for_resolution(const IFSSystem& sys, double resolution) {
    int d = 1;
    double len = sys.lambda * sys.hull_length();
    while (len > resolution && word_count(sys.branch_count(), d + 1) <= kWordCap && d < 64) {
        ++d;
        len *= sys.lambda;
    }
    return d;
}

}  // namespace detail

/// Union of depth-d images of the hull, merged into disjoint half-open
/// intervals. The union shrinks (or stays equal) as depth grows, so its total
/// length is a nonincreasing upper estimate of the attractor's measure.
struct AttractorCover {
    int depth = 0;
    std::vector<Interval> intervals;
    double lebesgue_est = 0.0;
};

inline AttractorCover attractor_cover(const IFSSystem& sys, int depth) {
    double piece = std::pow(sys.lambda, depth) * sys.hull_length();
    std::vector<double> lefts;
    lefts.reserve(static_cast<std::size_t>(
        std::min<std::uint64_t>(detail::word_count(sys.branch_count(), depth), detail::kWordCap)));
    detail::for_each_word(sys, depth, [&](double left) { lefts.push_back(left); });
    std::sort(lefts.begin(), lefts.end());

    AttractorCover cover;
    cover.depth = depth;
    for (double left : lefts) {
        if (!cover.intervals.empty() && left <= cover.intervals.back().hi) {
            cover.intervals.back().hi = std::max(cover.intervals.back().hi, left + piece);
        } else {
            cover.intervals.push_back({left, left + piece});
        }
    }
    for (const Interval& iv : cover.intervals) cover.lebesgue_est += iv.length();
    return cover;
}

/// Draws n_samples points of the invariant measure by truncating the random
/// digit expansion x = sum_{j<depth} lambda^j d_{w_j} with iid uniform digits.
/// Sample i is generated from substream(seed, i), so any contiguous batch of
/// indices reproduces the same points regardless of evaluation order.
inline std::vector<double> sample_measure(const IFSSystem& sys, std::size_t n_samples, int depth,
                                          std::uint64_t seed) {
    require(depth >= 1 && depth <= 4096, "BadDepth", "sample depth out of range");
    std::vector<double> out(n_samples);
    const std::size_t l = sys.branch_count();
    for (std::size_t i = 0; i < n_samples; ++i) {
        SplitMix64 rng = substream(seed, i);
        double x = 0.0;
        double s = 1.0;
        for (int j = 0; j < depth; ++j) {
            x += s * sys.digits[rng.next_below(l)];
            s *= sys.lambda;
        }
        out[i] = x;
    }
    return out;
}

/// mu restricted to half-open intervals, evaluated by depth-d word
/// enumeration: each word carries mass l^{-d} spread uniformly over its image
/// of the hull, and contributes its overlap fraction with `iv`. Exact
/// additivity over partitions holds by construction. Depth is chosen so the
/// word image length is below `resolution` (subject to the enumeration cap).
inline double ifs_interval_mass(const IFSSystem& sys, const Interval& iv,
                                double resolution = 1e-4) {
    if (iv.empty()) return 0.0;
    int depth = detail::depth_for_resolution(sys, resolution);
    double piece = std::pow(sys.lambda, depth) * sys.hull_length();
    double inv_piece = piece > 0.0 ? 1.0 / piece : 0.0;
    double word_mass = std::pow(1.0 / static_cast<double>(sys.branch_count()), depth);
    double total = 0.0;
    detail::for_each_word(sys, depth, [&](double left) {
        double ov = overlap_length({left, left + piece}, iv);
        if (ov > 0.0) total += word_mass * (piece > 0.0 ? ov * inv_piece : 1.0);
    });
    return total;
}

/// mu[0, lambda^n) via the shift recursion. N is the smallest index with
/// lambda^{N-1} < d_2 / lambda: from there on every shifted term of the
/// refinement identity sits strictly left of the support, so one step of the
/// identity reads mu[0, lambda^n) = (1/l) mu[0, lambda^{n-1}) exactly.
/// For n > N the value is l^{-(n-N)} times a Monte-Carlo estimate of
/// mu[0, lambda^N); for n <= N the interval itself is estimated directly.
struct MassNearZero {
    int n = 0;
    int threshold_index = 0;   // N above
    double value = 0.0;        // estimate of mu[0, lambda^n)
    double anchor = 0.0;       // Monte-Carlo estimate at the anchor index
    int anchor_index = 0;      // min(n, N)
    double anchor_sigma = 0.0; // binomial std error of the anchor estimate
    bool used_recursion = false;
};

inline int mass_recursion_threshold(const IFSSystem& sys) {
    double d2 = sys.digits[1];
    double bound = d2 / sys.lambda;
    int n = 1;
    double p = 1.0;  // lambda^{n-1}
    while (p >= bound && n < 4096) {
        p *= sys.lambda;
        ++n;
    }
    return n;
}

inline MassNearZero mass_near_zero(const IFSSystem& sys, int n, std::size_t mc_samples = 200000,
                                   std::uint64_t seed = 1, int mc_depth = 0) {
    require(n >= 0, "BadDepth", "power index must be nonnegative");
    MassNearZero out;
    out.n = n;
    out.threshold_index = mass_recursion_threshold(sys);
    out.anchor_index = std::min(n, out.threshold_index);
    if (mc_depth <= 0) {
        // Resolve well below the smallest interval of interest.
        double target = std::pow(sys.lambda, n) * 1e-3;
        mc_depth = 1;
        double len = sys.lambda * sys.hull_length();
        while (len > target && mc_depth < 2048) {
            ++mc_depth;
            len *= sys.lambda;
        }
    }
    const double cut = std::pow(sys.lambda, out.anchor_index);
    std::vector<double> pts = sample_measure(sys, mc_samples, mc_depth, seed);
    std::size_t hits = 0;
    for (double x : pts) {
        if (x < cut) ++hits;
    }
    out.anchor = static_cast<double>(hits) / static_cast<double>(mc_samples);
    out.anchor_sigma =
        std::sqrt(std::max(out.anchor * (1.0 - out.anchor), 1e-300) / static_cast<double>(mc_samples));
    out.value = out.anchor;
    if (n > out.threshold_index) {
        out.used_recursion = true;
        double step = 1.0 / static_cast<double>(sys.branch_count());
        for (int k = out.threshold_index; k < n; ++k) out.value *= step;
    }
    return out;
}

/// Lower-density check for the attractor near 0: the sequence
/// s_n = L(cover intersect [0, lambda^n)) / lambda^n and its running minimum.
/// When the cover itself vanishes with depth the check says nothing and is
/// flagged vacuous rather than reported as a failure.
struct Lemma41Report {
    std::vector<double> ratios;  // s_1 .. s_{n_max}
    double c_est = 0.0;          // min over the computed ratios
    bool vacuous = false;
    double cover_lebesgue = 0.0;
};

inline Lemma41Report lemma41_check(const IFSSystem& sys, int n_max, int depth) {
    Lemma41Report rep;
    AttractorCover cover = attractor_cover(sys, depth);
    rep.cover_lebesgue = cover.lebesgue_est;
    // Geometric decay of the cover across three extra depth steps marks the
    // attractor as (numerically) Lebesgue-null; the ratio test is vacuous then.
    if (depth > 3) {
        AttractorCover coarser = attractor_cover(sys, depth - 3);
        if (coarser.lebesgue_est > 0.0 && cover.lebesgue_est < 0.8 * coarser.lebesgue_est) {
            rep.vacuous = true;
        }
    }
    double p = sys.lambda;
    rep.c_est = inf;
    for (int n = 1; n <= n_max; ++n) {
        Interval window{0.0, p};
        double covered = 0.0;
        for (const Interval& iv : cover.intervals) covered += overlap_length(iv, window);
        double ratio = p > 0.0 ? covered / p : 0.0;
        rep.ratios.push_back(ratio);
        rep.c_est = std::min(rep.c_est, ratio);
        p *= sys.lambda;
    }
    if (rep.ratios.empty()) rep.c_est = 0.0;
    return rep;
}

/// Tile classification for the invariant measure.
enum class TileVerdict {
    Tile,                        // lambda = 1/l and the depth-d pieces overlap on a null set
    NotTile_Overlap,             // lambda = 1/l but branch images overlap with positive length
    NotTile_ContractionMismatch, // lambda > 1/l: cover persists but cannot tile
    Singular                     // lambda < 1/l, or the cover's length vanishes with depth
};

inline const char* to_string(TileVerdict v) {
    switch (v) {
        case TileVerdict::Tile: return "Tile";
        case TileVerdict::NotTile_Overlap: return "NotTile_Overlap";
        case TileVerdict::NotTile_ContractionMismatch: return "NotTile_ContractionMismatch";
        case TileVerdict::Singular: return "Singular";
    }
    return "?";
}

struct TileReport {
    TileVerdict verdict = TileVerdict::Singular;
    double lebesgue_est = 0.0;
    double overlap_est = 0.0;  // total pairwise overlap of branch images of the cover
    int depth = 0;
};

inline TileReport tile_verdict(const IFSSystem& sys, int depth = 12) {
    TileReport rep;
    rep.depth = depth;
    double inv_l = 1.0 / static_cast<double>(sys.branch_count());
    // Clamp depth to the enumeration cap.
    while (depth > 1 && detail::word_count(sys.branch_count(), depth) > detail::kWordCap) --depth;
    rep.depth = depth;
    AttractorCover cover = attractor_cover(sys, depth);
    rep.lebesgue_est = cover.lebesgue_est;

    if (sys.lambda < inv_l - 1e-9) {
        rep.verdict = TileVerdict::Singular;
        return rep;
    }
    // Detect a cover collapsing geometrically even when lambda >= 1/l.
    if (depth > 3) {
        AttractorCover coarser = attractor_cover(sys, depth - 3);
        if (coarser.lebesgue_est > 0.0 && cover.lebesgue_est < 0.8 * coarser.lebesgue_est) {
            rep.verdict = TileVerdict::Singular;
            return rep;
        }
    }
    if (sys.lambda > inv_l + 1e-9) {
        rep.verdict = TileVerdict::NotTile_ContractionMismatch;
        return rep;
    }
    // lambda = 1/l: tile iff the branch images of the attractor overlap on a
    // null set. Branch images of the sorted disjoint cover are again sorted
    // and disjoint, so each pairwise overlap is a single two-pointer sweep.
    double total_overlap = 0.0;
    const std::size_t l = sys.branch_count();
    std::vector<std::vector<Interval>> images(l);
    for (std::size_t i = 0; i < l; ++i) {
        images[i].reserve(cover.intervals.size());
        for (const Interval& a : cover.intervals) {
            images[i].push_back(
                {sys.lambda * a.lo + sys.digits[i], sys.lambda * a.hi + sys.digits[i]});
        }
    }
    for (std::size_t i = 0; i < l; ++i) {
        for (std::size_t j = i + 1; j < l; ++j) {
            const std::vector<Interval>& xs = images[i];
            const std::vector<Interval>& ys = images[j];
            std::size_t p = 0, q = 0;
            while (p < xs.size() && q < ys.size()) {
                total_overlap += overlap_length(xs[p], ys[q]);
                if (xs[p].hi < ys[q].hi) {
                    ++p;
                } else {
                    ++q;
                }
            }
        }
    }
    rep.overlap_est = total_overlap;
    double scale = std::max(cover.lebesgue_est, 1e-300);
    rep.verdict = (total_overlap <= 1e-3 * scale) ? TileVerdict::Tile : TileVerdict::NotTile_Overlap;
    return rep;
}

}  // namespace framelab
