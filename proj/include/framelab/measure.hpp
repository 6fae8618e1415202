#pragma once

#include <optional>
#include <string>
#include <vector>

#include "common.hpp"
#include "ifs.hpp"

namespace framelab {

enum class DensityKind { Uniform, Triangle, InvSqrt, Grid };

/// Density descriptor before normalization. Closed forms carry analytic
/// slopes (used by the oscillatory quadrature) and may declare boundedness
/// flags that the essential-bound heuristic cannot infer reliably.
struct DensityFn {
    DensityKind kind = DensityKind::Uniform;
    double a = 0.0, b = 1.0;           // uniform support
    std::vector<double> xs, ys;        // grid samples (piecewise linear)
    std::optional<bool> declared_bounded_below;
    std::optional<bool> declared_bounded_above;
    std::string text;                  // descriptor round-trip form

    Interval natural_hull() const {
        switch (kind) {
            case DensityKind::Uniform: return {a, b};
            case DensityKind::Triangle: return {-1.0, 1.0};
            case DensityKind::InvSqrt: return {0.0, 1.0};
            case DensityKind::Grid: return {xs.front(), xs.back()};
        }
        return {0.0, 1.0};
    }

    double value(double x) const {
        switch (kind) {
            case DensityKind::Uniform: return (x >= a && x < b) ? 1.0 : 0.0;
            case DensityKind::Triangle: return std::abs(x) < 1.0 ? 1.0 - std::abs(x) : 0.0;
            case DensityKind::InvSqrt: return (x > 0.0 && x <= 1.0) ? 0.5 / std::sqrt(x) : 0.0;
            case DensityKind::Grid: return grid_value(x);
        }
        return 0.0;
    }

    double slope(double x) const {
        switch (kind) {
            case DensityKind::Uniform: return 0.0;
            case DensityKind::Triangle:
                if (std::abs(x) >= 1.0 || x == 0.0) return 0.0;
                return x < 0.0 ? 1.0 : -1.0;
            case DensityKind::InvSqrt:
                return (x > 0.0 && x <= 1.0) ? -0.25 / (x * std::sqrt(x)) : 0.0;
            case DensityKind::Grid: return grid_slope(x);
        }
        return 0.0;
    }

private:
    std::size_t grid_segment(double x) const {
        auto it = std::upper_bound(xs.begin(), xs.end(), x);
        if (it == xs.begin() || it == xs.end()) return xs.size();
        return static_cast<std::size_t>(it - xs.begin()) - 1;
    }
    double grid_value(double x) const {
        std::size_t i = grid_segment(x);
        if (i >= xs.size()) return (x == xs.back()) ? ys.back() : 0.0;
        double t = (x - xs[i]) / (xs[i + 1] - xs[i]);
        return ys[i] + t * (ys[i + 1] - ys[i]);
    }
    double grid_slope(double x) const {
        std::size_t i = grid_segment(x);
        if (i >= xs.size()) return 0.0;
        return (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
    }
};

inline DensityFn uniform_density(double a, double b) {
    require(b > a, "EmptySupport", "uniform(a,b) needs a < b");
    DensityFn f;
    f.kind = DensityKind::Uniform;
    f.a = a;
    f.b = b;
    f.declared_bounded_below = true;
    f.declared_bounded_above = true;
    f.text = "uniform(" + format_double(a) + "," + format_double(b) + ")";
    return f;
}

inline DensityFn triangle_density() {
    DensityFn f;
    f.kind = DensityKind::Triangle;
    f.declared_bounded_below = false;  // 1-|x| runs down to 0 at the support edges
    f.declared_bounded_above = true;
    f.text = "triangle";
    return f;
}

inline DensityFn invsqrt_density() {
    DensityFn f;
    f.kind = DensityKind::InvSqrt;
    f.declared_bounded_below = true;   // 1/(2 sqrt x) >= 1/2 on (0,1]
    f.declared_bounded_above = false;  // blows up at 0
    f.text = "invsqrt";
    return f;
}

inline DensityFn grid_density(std::vector<double> xs, std::vector<double> ys, std::string text) {
    require(xs.size() == ys.size() && xs.size() >= 2, "BadGrid",
            "grid density needs matching x/y samples, at least two");
    for (std::size_t i = 1; i < xs.size(); ++i)
        require(xs[i] > xs[i - 1], "BadGrid", "grid density abscissae must increase");
    DensityFn f;
    f.kind = DensityKind::Grid;
    f.xs = std::move(xs);
    f.ys = std::move(ys);
    f.text = std::move(text);
    return f;
}

enum class MeasureVariant { Density, SelfSimilar };

/// Compactly supported probability measure on the line. The Density variant
/// is phi(x) dx renormalized so midpoint quadrature at the construction grid
/// gives total mass 1. The SelfSimilar variant is the invariant measure of an
/// equal-weight IFS, evaluated by digit-word enumeration.
struct Measure1D {
    MeasureVariant variant = MeasureVariant::Density;
    Interval support_hull;

    // Density variant.
    DensityFn density;
    double norm_factor = 1.0;       // measure density = norm_factor * density.value
    int grid_n = 0;                 // construction grid
    std::vector<double> weights;    // cell masses at the construction grid, sum 1

    // SelfSimilar variant.
    IFSSystem ifs;
    double enumeration_resolution = 1e-4;

    double cell_width() const { return support_hull.length() / grid_n; }
    double cell_midpoint(int p) const { return support_hull.lo + (p + 0.5) * cell_width(); }

    /// Normalized density value / slope (Density variant only).
    double density_at(double x) const { return norm_factor * density.value(x); }
    double density_slope_at(double x) const { return norm_factor * density.slope(x); }
};

inline Measure1D make_density_measure(const DensityFn& density_fn, Interval support_hull,
                                      int grid_n) {
    require(grid_n >= 8 && grid_n <= (1 << 22), "BadGrid",
            "construction grid must have between 8 and 2^22 cells");
    require(!support_hull.empty(), "EmptySupport", "support hull is empty");
    Measure1D m;
    m.variant = MeasureVariant::Density;
    m.support_hull = support_hull;
    m.density = density_fn;
    m.grid_n = grid_n;
    const double h = m.cell_width();
    m.weights.resize(grid_n);
    double mass = 0.0;
    for (int p = 0; p < grid_n; ++p) {
        double v = density_fn.value(m.cell_midpoint(p));
        require(v >= 0.0, "NegativeDensity",
                "density negative at x = " + format_double(m.cell_midpoint(p)));
        m.weights[p] = v * h;
        mass += m.weights[p];
    }
    require(mass > 1e-300, "NonPositiveMass", "density integrates to zero on the support hull");
    m.norm_factor = 1.0 / mass;
    for (double& w : m.weights) w *= m.norm_factor;
    return m;
}

inline Measure1D make_selfsimilar_measure(const IFSSystem& sys, double enumeration_resolution = 1e-4) {
    Measure1D m;
    m.variant = MeasureVariant::SelfSimilar;
    m.ifs = sys;
    m.support_hull = sys.attractor_hull;
    m.enumeration_resolution = enumeration_resolution;
    return m;
}

/// mu(iv) for half-open iv. Density: cell masses weighted by overlap
/// fraction, so masses add exactly over partitions. SelfSimilar: digit-word
/// enumeration with the same overlap-fraction rule.
inline double interval_mass(const Measure1D& m, const Interval& iv) {
    if (iv.empty()) return 0.0;
    if (m.variant == MeasureVariant::SelfSimilar)
        return ifs_interval_mass(m.ifs, iv, m.enumeration_resolution);
    const double h = m.cell_width();
    Interval clipped = iv.clipped_to(m.support_hull);
    if (clipped.empty()) return 0.0;
    int p_lo = std::max(0, static_cast<int>(std::floor((clipped.lo - m.support_hull.lo) / h)));
    int p_hi = std::min(m.grid_n - 1, static_cast<int>(std::floor((clipped.hi - m.support_hull.lo) / h)));
    double total = 0.0;
    for (int p = p_lo; p <= p_hi; ++p) {
        Interval cell{m.support_hull.lo + p * h, m.support_hull.lo + (p + 1) * h};
        double ov = overlap_length(cell, clipped);
        if (ov > 0.0) total += m.weights[p] * (ov / h);
    }
    return total;
}

/// Grid approximation of the level set {lo < phi <= hi}: the union of grid
/// cells whose midpoint sample lands in the band.
struct LevelSet {
    double band_lo = 0.0, band_hi = 0.0;
    std::vector<Interval> cells;   // merged runs of selected cells
    double lebesgue = 0.0;         // total length of the selected cells
    double mu_mass = 0.0;          // measure carried by the selected cells
    int grid_n = 0;
};

inline LevelSet level_set(const Measure1D& m, double lo, double hi, int grid_override = 0) {
    require(m.variant == MeasureVariant::Density, "NotDensityVariant",
            "level sets need a density variant measure");
    require(lo < hi, "BadBand", "level set band needs lo < hi");
    LevelSet out;
    out.band_lo = lo;
    out.band_hi = hi;
    int n = grid_override > 0 ? grid_override : m.grid_n;
    out.grid_n = n;
    const double h = m.support_hull.length() / n;
    long cell_count = 0;
    for (int p = 0; p < n; ++p) {
        double x = m.support_hull.lo + (p + 0.5) * h;
        double v = m.density_at(x);
        if (v > lo && v <= hi) {
            ++cell_count;
            out.mu_mass += v * h;
            Interval cell{m.support_hull.lo + p * h, m.support_hull.lo + (p + 1) * h};
            if (!out.cells.empty() && out.cells.back().hi >= cell.lo) {
                out.cells.back().hi = cell.hi;
            } else {
                out.cells.push_back(cell);
            }
        }
    }
    out.lebesgue = static_cast<double>(cell_count) * h;
    return out;
}

/// Essential infimum / supremum estimates of the density over its positive
/// part, from midpoint samples at geometrically refined grids. Boundedness is
/// decided by how the extreme sample drifts across two refinement steps
/// (factor 1.5 by default); a descriptor's declared flags take precedence.
struct EssentialBounds {
    double m_est = 0.0;
    double M_est = 0.0;
    bool bounded_below = true;
    bool bounded_above = true;
    std::vector<double> m_trace, M_trace;
    std::vector<int> grids;
};

inline EssentialBounds essential_bounds(const Measure1D& m, int refinement_levels = 3,
                                        double density_floor = 1e-12, double drift_factor = 1.5) {
    require(m.variant == MeasureVariant::Density, "NotDensityVariant",
            "essential bounds need a density variant measure");
    require(refinement_levels >= 1 && refinement_levels <= 12, "BadRefinement",
            "refinement levels out of range");
    EssentialBounds out;
    for (int level = 0; level < refinement_levels; ++level) {
        long n = static_cast<long>(m.grid_n) << level;
        require(n <= (1L << 22), "BadRefinement", "refined grid exceeds 2^22 cells");
        const double h = m.support_hull.length() / static_cast<double>(n);
        double lo = inf, hi = 0.0;
        for (long p = 0; p < n; ++p) {
            double x = m.support_hull.lo + (static_cast<double>(p) + 0.5) * h;
            double v = m.density_at(x);
            if (v > density_floor) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        }
        out.m_trace.push_back(lo);
        out.M_trace.push_back(hi);
        out.grids.push_back(static_cast<int>(n));
    }
    out.m_est = out.m_trace.back();
    out.M_est = out.M_trace.back();
    std::size_t last = out.m_trace.size() - 1;
    std::size_t ref = last >= 2 ? last - 2 : 0;
    if (last > 0) {
        out.bounded_below = !(out.m_trace[ref] / out.m_est > drift_factor);
        out.bounded_above = !(out.M_est / out.M_trace[ref] > drift_factor);
    }
    if (m.density.declared_bounded_below) out.bounded_below = *m.density.declared_bounded_below;
    if (m.density.declared_bounded_above) out.bounded_above = *m.density.declared_bounded_above;
    return out;
}

}  // namespace framelab
