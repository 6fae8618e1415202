#pragma once

#include <optional>
#include <string>
#include <vector>

#include "common.hpp"
#include "ifs.hpp"
#include "measure.hpp"
#include "spectrum.hpp"

namespace framelab {

/// Convention used throughout: mu_hat(xi) = integral of e^{-2 pi i xi x} dmu(x),
/// and the candidate frame vectors are e_lambda(x) = e^{+2 pi i lambda x}, so
/// <e_xi, e_lambda>_mu = mu_hat(lambda - xi).
enum class FTMethod { Quadrature, Product };

struct FTEvaluation {
    double xi = 0.0;
    cplx value{0.0, 0.0};
    double abs_error_bound = 0.0;
    FTMethod method = FTMethod::Quadrature;
    int truncation_depth = 0;  // product: last factor index J; quadrature: grid cells
};

namespace detail {

/// Exact moments of e^{-i omega u} against 1 and u over a cell [-h/2, h/2):
///   M0 = integral e^{-i omega u} du = h sinc(omega h / 2)            (real)
///   M1 = integral u e^{-i omega u} du
///      = i (h cos(omega h/2)/omega - 2 sin(omega h/2)/omega^2)       (imaginary)
/// A cell with midpoint value v and slope s contributes e^{-i omega x_mid}
/// (v M0 + s M1), which integrates a linear density against the oscillation
/// exactly. That removes the 2 pi |xi| h term a flat midpoint rule pays, so
/// coarse grids stay accurate at high frequency.
inline double filon_m0(double omega, double h) { return h * sinc(0.5 * omega * h); }

inline double filon_m1_imag(double omega, double h) {
    double t = omega * h;
    if (std::abs(t) < 1e-3) {
        return -(omega * h * h * h / 12.0) * (1.0 - t * t / 40.0);
    }
    double theta = 0.5 * t;
    return h * std::cos(theta) / omega - 2.0 * std::sin(theta) / (omega * omega);
}

/// One Filon-midpoint pass over the support hull at n cells. Weights are
/// renormalized at this grid so the evaluated measure is a probability
/// measure at every refinement level (in particular the value at xi = 0 is
/// exactly 1 up to rounding).
inline cplx filon_pass(const Measure1D& m, double xi, long n) {
    const double a = m.support_hull.lo;
    const double h = m.support_hull.length() / static_cast<double>(n);
    double raw_mass = 0.0;
    for (long p = 0; p < n; ++p) {
        raw_mass += m.density.value(a + (static_cast<double>(p) + 0.5) * h);
    }
    raw_mass *= h;
    require(raw_mass > 1e-300, "NonPositiveMass", "density vanished on refinement grid");
    const double scale = 1.0 / raw_mass;
    const double omega = two_pi * xi;
    const double m0 = filon_m0(omega, h);
    const double m1 = filon_m1_imag(omega, h);
    cplx acc{0.0, 0.0};
    for (long p = 0; p < n; ++p) {
        double x = a + (static_cast<double>(p) + 0.5) * h;
        double v = m.density.value(x) * scale;
        if (v == 0.0 && m.density.slope(x) == 0.0) continue;
        double s = m.density.slope(x) * scale;
        cplx phase = cis_turns(-xi * x);
        acc += phase * cplx(v * m0, s * m1);
    }
    return acc;
}

inline constexpr long kQuadratureCellCap = 1L << 21;

}  // namespace detail

/// mu_hat for the density variant: Filon-midpoint quadrature with grid
/// doubling until successive passes agree to tol/3. The reported error bound
/// is the extrapolated doubling residual; it is honest for the smooth and
/// piecewise-linear descriptors and still a fair estimate near an integrable
/// singularity (where convergence slows to O(sqrt h)).
inline FTEvaluation ft_density(const Measure1D& m, double xi, double tol) {
    FTEvaluation out;
    out.xi = xi;
    out.method = FTMethod::Quadrature;
    long n = std::max(64, m.grid_n);
    cplx prev = detail::filon_pass(m, xi, n);
    for (;;) {
        long n2 = n * 2;
        cplx cur = detail::filon_pass(m, xi, n2);
        double resid = std::abs(cur - prev);
        double bound = 3.0 * resid + 1e-15;
        if (bound <= tol) {
            out.value = cur;
            out.abs_error_bound = bound;
            out.truncation_depth = static_cast<int>(std::min<long>(n2, 1L << 30));
            return out;
        }
        if (n2 >= detail::kQuadratureCellCap) {
            raise("TolTooTight", "quadrature residual " + format_double(bound) +
                                     " above tol " + format_double(tol) + " at the cell cap");
        }
        prev = cur;
        n = n2;
    }
}

/// One transfer factor M(xi) = (1/l) sum_k e^{-2 pi i d_k xi}.
inline cplx ifs_transfer_factor(const IFSSystem& sys, double xi) {
    cplx acc{0.0, 0.0};
    for (double d : sys.digits) acc += cis_turns(-d * xi);
    return acc / static_cast<double>(sys.branch_count());
}

/// mu_hat for the self-similar variant: the truncated product
/// prod_{j=0..J} M(lambda^j xi). Truncation depth J is the smallest index
/// with tail sum T = sum_{j>J} 2 pi d_max lambda^j |xi| <= tol; the reported
/// bound expm1(T) then dominates |1 - prod_{j>J} M| since |M(eta) - 1| <=
/// 2 pi d_max |eta|.
inline FTEvaluation ft_selfsimilar(const IFSSystem& sys, double xi, double tol) {
    FTEvaluation out;
    out.xi = xi;
    out.method = FTMethod::Product;
    const double d_max = sys.digits.back();
    double tail = two_pi * d_max * std::abs(xi) * sys.lambda / (1.0 - sys.lambda);
    int J = 0;
    while (tail > tol && J < 100000) {
        tail *= sys.lambda;
        ++J;
    }
    require(tail <= tol, "TolTooTight", "product tail does not reach tol");
    cplx prod{1.0, 0.0};
    double scale = 1.0;
    for (int j = 0; j <= J; ++j) {
        prod *= ifs_transfer_factor(sys, scale * xi);
        scale *= sys.lambda;
    }
    out.value = prod;
    out.abs_error_bound = std::expm1(tail);
    out.truncation_depth = J;
    return out;
}

inline FTEvaluation ft(const Measure1D& m, double xi, double tol = 1e-9) {
    require(tol > 0.0, "BadTolerance", "ft tolerance must be positive");
    return m.variant == MeasureVariant::Density ? ft_density(m, xi, tol)
                                                : ft_selfsimilar(m.ifs, xi, tol);
}

/// |mu_hat(xi) - M(xi) mu_hat(lambda xi)| with independently truncated
/// evaluations. The identity is exact for the invariant measure, so the
/// residual is bounded by the two truncation errors (about 2 tol).
inline double refinement_identity_residual(const IFSSystem& sys, double xi, double tol = 1e-9) {
    FTEvaluation whole = ft_selfsimilar(sys, xi, tol);
    FTEvaluation shrunk = ft_selfsimilar(sys, sys.lambda * xi, tol);
    cplx rhs = ifs_transfer_factor(sys, xi) * shrunk.value;
    return std::abs(whole.value - rhs);
}

/// Certificate |mu_hat(xi)| <= C / |xi| from the total variation of the
/// density (integration by parts against d phi). Only piecewise monotone
/// closed forms with bounded variation get one; user grids and the
/// inverse-sqrt singularity report "unknown" and callers fall back to an
/// infinite tail bound.
inline std::optional<double> decay_certificate(const Measure1D& m) {
    if (m.variant != MeasureVariant::Density) return std::nullopt;
    switch (m.density.kind) {
        case DensityKind::Uniform: {
            double height = m.norm_factor;  // normalized plateau height
            return 2.0 * height / two_pi;
        }
        case DensityKind::Triangle: {
            double peak = m.norm_factor;  // density rises to peak and back down
            return 2.0 * peak / two_pi;
        }
        case DensityKind::InvSqrt:
        case DensityKind::Grid: return std::nullopt;
    }
    return std::nullopt;
}

/// Windowed periodization sum_{|n| <= W} |mu_hat(x + n)|^p plus a rigorous
/// bound on the omitted tail (infinite when no decay certificate exists).
struct PowerSum {
    double x = 0.0;
    int power = 2;
    int n_window = 0;
    double partial_sum = 0.0;
    double tail_bound = inf;
};

inline PowerSum periodization_power_sum(const Measure1D& m, double x, int p, int n_window,
                                        double tol_each = 1e-9) {
    require(p == 2 || p == 4, "BadPower", "periodization power must be 2 or 4");
    require(n_window >= 1, "BadWindow", "periodization window must be at least 1");
    PowerSum out;
    out.x = x;
    out.power = p;
    out.n_window = n_window;
    for (int n = -n_window; n <= n_window; ++n) {
        double a = std::abs(ft(m, x + static_cast<double>(n), tol_each).value);
        out.partial_sum += (p == 2) ? a * a : a * a * a * a;
    }
    if (auto cert = decay_certificate(m)) {
        // Omitted frequencies have |x + n| >= W + 1 - |x|; at most two fall in
        // each unit band [t, t+1). Bound the series by its first term plus the
        // integral comparison.
        double start = std::max(1.0, std::floor(static_cast<double>(n_window) + 1.0 - std::abs(x)));
        double cp = std::pow(*cert, p);
        out.tail_bound = 2.0 * cp *
                         (std::pow(start, -p) +
                          std::pow(start, 1.0 - p) / (static_cast<double>(p) - 1.0));
    }
    return out;
}

/// sum_{lambda in s} |mu_hat(xi + lambda)|^2 swept over a grid of xi values.
struct ScanResult {
    std::vector<double> xi;
    std::vector<double> sums;
    double min_sum = inf;
    double max_sum = 0.0;
    double argmin = 0.0;
    double argmax = 0.0;
    double tail_bound = inf;  // only finite when a decay certificate applies
};

namespace detail {

inline bool all_integer(const std::vector<double>& pts) {
    for (double p : pts) {
        if (std::abs(p - std::nearbyint(p)) > 1e-12) return false;
    }
    return !pts.empty();
}

/// Fast path for integer spectra on density measures. For each xi the values
/// mu_hat(xi + n) for all integers n in the spectrum come from one fold of
/// the sampled density into N bins modulo the unit period:
///   e^{-2 pi i n x_p} depends only on p mod N when the cell width is 1/N,
/// so a single O(samples) fold plus an O(N * |s|) phase recurrence replaces
/// |s| separate quadratures. Filon moment filters are applied per output
/// frequency, keeping the piecewise-linear cases exact.
inline ScanResult integer_scan_density(const Measure1D& m, const std::vector<long>& ns,
                                       const std::vector<double>& xi_grid, long n_unit) {
    ScanResult out;
    out.xi = xi_grid;
    const double a = m.support_hull.lo;
    const double h = 1.0 / static_cast<double>(n_unit);
    const long span = static_cast<long>(std::ceil(m.support_hull.length() - 1e-12));
    const long n_tot = n_unit * std::max(1L, span);

    // Sample values and slopes once; renormalize to a probability quadrature.
    std::vector<double> vals(static_cast<std::size_t>(n_tot));
    std::vector<double> slopes(static_cast<std::size_t>(n_tot));
    double raw_mass = 0.0;
    for (long p = 0; p < n_tot; ++p) {
        double x = a + (static_cast<double>(p) + 0.5) * h;
        vals[static_cast<std::size_t>(p)] = m.density.value(x);
        slopes[static_cast<std::size_t>(p)] = m.density.slope(x);
        raw_mass += vals[static_cast<std::size_t>(p)];
    }
    raw_mass *= h;
    require(raw_mass > 1e-300, "NonPositiveMass", "density vanished on scan grid");
    const double scale = 1.0 / raw_mass;

    std::vector<cplx> c0(static_cast<std::size_t>(n_unit));
    std::vector<cplx> c1(static_cast<std::size_t>(n_unit));
    out.sums.reserve(xi_grid.size());
    for (double xi : xi_grid) {
        std::fill(c0.begin(), c0.end(), cplx{0.0, 0.0});
        std::fill(c1.begin(), c1.end(), cplx{0.0, 0.0});
        for (long p = 0; p < n_tot; ++p) {
            double v = vals[static_cast<std::size_t>(p)];
            double sl = slopes[static_cast<std::size_t>(p)];
            if (v == 0.0 && sl == 0.0) continue;
            double x = a + (static_cast<double>(p) + 0.5) * h;
            cplx phase = cis_turns(-xi * x);
            std::size_t r = static_cast<std::size_t>(p % n_unit);
            c0[r] += phase * (v * scale);
            c1[r] += phase * (sl * scale);
        }
        double sum = 0.0;
        for (long n : ns) {
            // D(n) = e^{-2 pi i n (a + h/2)} sum_r c[r] e^{-2 pi i n r h}
            cplx rot = cis_turns(-static_cast<double>(n) * (a + 0.5 * h));
            cplx step = cis_turns(-static_cast<double>(n) * h);
            cplx ph{1.0, 0.0};
            cplx d0{0.0, 0.0}, d1{0.0, 0.0};
            for (std::size_t r = 0; r < static_cast<std::size_t>(n_unit); ++r) {
                d0 += c0[r] * ph;
                d1 += c1[r] * ph;
                ph *= step;
            }
            double omega = two_pi * (xi + static_cast<double>(n));
            cplx value = rot * (d0 * filon_m0(omega, h) + d1 * cplx(0.0, filon_m1_imag(omega, h)));
            sum += std::norm(value);
        }
        out.sums.push_back(sum);
    }
    return out;
}

}  // namespace detail

inline ScanResult frame_condition_scan(const Measure1D& m, const Spectrum& s,
                                       const std::vector<double>& xi_grid, double tol_each = 1e-9) {
    require(!xi_grid.empty(), "BadGrid", "scan needs at least one xi value");
    require(s.size() > 0, "EmptySpectrum", "scan needs a nonempty spectrum");
    ScanResult out;
    if (m.variant == MeasureVariant::Density && detail::all_integer(s.points)) {
        std::vector<long> ns;
        ns.reserve(s.size());
        for (double p : s.points) ns.push_back(static_cast<long>(std::nearbyint(p)));
        out = detail::integer_scan_density(m, ns, xi_grid, 1024);
    } else {
        out.xi = xi_grid;
        out.sums.reserve(xi_grid.size());
        for (double xi : xi_grid) {
            double sum = 0.0;
            for (double lam : s.points) sum += std::norm(ft(m, xi + lam, tol_each).value);
            out.sums.push_back(sum);
        }
    }
    for (std::size_t i = 0; i < out.sums.size(); ++i) {
        if (out.sums[i] < out.min_sum) {
            out.min_sum = out.sums[i];
            out.argmin = out.xi[i];
        }
        if (out.sums[i] > out.max_sum) {
            out.max_sum = out.sums[i];
            out.argmax = out.xi[i];
        }
    }
    if (auto cert = decay_certificate(m)) {
        // Tail of the full integer periodization beyond the spectrum window,
        // valid when the scan is read as a truncated periodization.
        double w = std::min(std::abs(s.window.lo), std::abs(s.window.hi));
        double start = std::max(1.0, std::floor(w));
        double c2 = (*cert) * (*cert);
        out.tail_bound = 2.0 * c2 * (1.0 / (start * start) + 1.0 / start);
    }
    return out;
}

/// Restriction of the analysis functional to a grid-aligned cell union:
/// <chi_E, e_lambda>_mu = integral over E of phi(x) e^{-2 pi i lambda x} dx,
/// evaluated cell by cell with the Filon moments so high frequencies stay exact
/// for piecewise-linear densities. `ls` must come from level_set on `m`.
inline cplx level_set_ft(const Measure1D& m, const LevelSet& ls, double lambda) {
    const double h = m.support_hull.length() / ls.grid_n;
    const double omega = two_pi * lambda;
    const double m0 = detail::filon_m0(omega, h);
    const double m1 = detail::filon_m1_imag(omega, h);
    cplx acc{0.0, 0.0};
    for (const Interval& run : ls.cells) {
        long p0 = static_cast<long>(std::llround((run.lo - m.support_hull.lo) / h));
        long count = static_cast<long>(std::llround(run.length() / h));
        for (long q = 0; q < count; ++q) {
            double x = m.support_hull.lo + (static_cast<double>(p0 + q) + 0.5) * h;
            cplx phase = cis_turns(-lambda * x);
            acc += phase * cplx(m.density_at(x) * m0, m.density_slope_at(x) * m1);
        }
    }
    return acc;
}

}  // namespace framelab
