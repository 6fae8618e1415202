#pragma once

#include <cstdint>
#include <vector>

#include "common.hpp"

namespace framelab {

/// Dense Hermitian matrix, both triangles stored row-major.
struct HermitianMatrix {
    long n = 0;
    std::vector<cplx> a;

    explicit HermitianMatrix(long size = 0)
        : n(size), a(static_cast<std::size_t>(size) * static_cast<std::size_t>(size)) {}

    cplx& at(long i, long j) { return a[static_cast<std::size_t>(i * n + j)]; }
    const cplx& at(long i, long j) const { return a[static_cast<std::size_t>(i * n + j)]; }

    double trace_real() const {
        double t = 0.0;
        for (long i = 0; i < n; ++i) t += at(i, i).real();
        return t;
    }

    double frobenius() const {
        double s = 0.0;
        for (const cplx& z : a) s += std::norm(z);
        return std::sqrt(s);
    }

    double off_diagonal_norm() const {
        double s = 0.0;
        for (long i = 0; i < n; ++i) {
            for (long j = 0; j < n; ++j) {
                if (i != j) s += std::norm(at(i, j));
            }
        }
        return std::sqrt(s);
    }

    std::vector<cplx> apply(const std::vector<cplx>& v) const {
        std::vector<cplx> out(static_cast<std::size_t>(n));
        for (long i = 0; i < n; ++i) {
            cplx acc{0.0, 0.0};
            const cplx* row = &a[static_cast<std::size_t>(i * n)];
            for (long j = 0; j < n; ++j) acc += row[j] * v[static_cast<std::size_t>(j)];
            out[static_cast<std::size_t>(i)] = acc;
        }
        return out;
    }
};

struct JacobiResult {
    std::vector<double> eigenvalues;  // ascending
    int sweeps = 0;
    double off_norm = 0.0;  // final off-diagonal Frobenius norm, also an
                            // absolute error certificate for each eigenvalue
};

/// Cyclic-by-row complex Jacobi. Destroys its input. Each rotation zeroes one
/// off-diagonal pair exactly; the off-diagonal norm collapses quadratically
/// once sweeps start overlapping, so 60 sweeps is far beyond what any
/// well-posed input needs.
inline JacobiResult jacobi_eigenvalues(HermitianMatrix A, double off_target = 1e-10,
                                       int max_sweeps = 60) {
    const long n = A.n;
    JacobiResult res;
    if (n == 1) {
        res.eigenvalues = {A.at(0, 0).real()};
        return res;
    }
    for (res.sweeps = 0; res.sweeps < max_sweeps; ++res.sweeps) {
        res.off_norm = A.off_diagonal_norm();
        if (res.off_norm <= off_target) break;
        const double skip = off_target / (4.0 * static_cast<double>(n));
        for (long p = 0; p < n - 1; ++p) {
            for (long q = p + 1; q < n; ++q) {
                cplx g = A.at(p, q);
                double mag = std::abs(g);
                if (mag <= skip) continue;
                cplx u = g / mag;  // e^{i phi}
                double alpha = A.at(p, p).real();
                double beta = A.at(q, q).real();
                // Zeroing angle for the rotation [[c, -s u], [s conj(u), c]]:
                // tan(2 theta) = 2|g| / (beta - alpha).
                double tau = (alpha - beta) / (2.0 * mag);
                double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                double c = 1.0 / std::sqrt(1.0 + t * t);
                double s = t * c;
                // Columns p and q, rows restored by Hermitian symmetry.
                for (long i = 0; i < n; ++i) {
                    if (i == p || i == q) continue;
                    cplx aip = A.at(i, p);
                    cplx aiq = A.at(i, q);
                    cplx nip = aip * c + aiq * (s * std::conj(u));
                    cplx niq = aiq * c - aip * (s * u);
                    A.at(i, p) = nip;
                    A.at(p, i) = std::conj(nip);
                    A.at(i, q) = niq;
                    A.at(q, i) = std::conj(niq);
                }
                double shift = 2.0 * mag * c * s;
                A.at(p, p) = {alpha * c * c + beta * s * s + shift, 0.0};
                A.at(q, q) = {alpha * s * s + beta * c * c - shift, 0.0};
                A.at(p, q) = {0.0, 0.0};
                A.at(q, p) = {0.0, 0.0};
            }
        }
    }
    require(res.off_norm <= off_target || max_sweeps == 0, "EigenNoConvergence",
            "Jacobi off-diagonal norm " + format_double(res.off_norm) + " above target " +
                format_double(off_target) + " after " + std::to_string(res.sweeps) + " sweeps");
    res.eigenvalues.resize(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) res.eigenvalues[static_cast<std::size_t>(i)] = A.at(i, i).real();
    std::sort(res.eigenvalues.begin(), res.eigenvalues.end());
    return res;
}

struct PowerResult {
    double value = 0.0;     // Rayleigh quotient at the final iterate
    double residual = 0.0;  // ||A v - value v|| / max(|value|, 1e-30)
    long iterations = 0;
};

namespace detail {

inline std::vector<cplx> random_unit_vector(long n, std::uint64_t seed) {
    SplitMix64 rng(seed * 0x9e3779b97f4a7c15ULL + 1);
    std::vector<cplx> v(static_cast<std::size_t>(n));
    double norm_sq = 0.0;
    for (auto& z : v) {
        z = {rng.next_in(-1.0, 1.0), rng.next_in(-1.0, 1.0)};
        norm_sq += std::norm(z);
    }
    double inv = 1.0 / std::sqrt(norm_sq);
    for (auto& z : v) z *= inv;
    return v;
}

}  // namespace detail

/// Power iteration for the largest eigenvalue of a PSD Hermitian matrix.
inline PowerResult power_largest(const HermitianMatrix& A, std::uint64_t seed = 7,
                                 double rel_residual = 1e-8, long max_iters = 50000) {
    std::vector<cplx> v = detail::random_unit_vector(A.n, seed);
    PowerResult res;
    for (res.iterations = 1; res.iterations <= max_iters; ++res.iterations) {
        std::vector<cplx> w = A.apply(v);
        double rho = 0.0;
        for (long i = 0; i < A.n; ++i) {
            rho += (std::conj(v[static_cast<std::size_t>(i)]) * w[static_cast<std::size_t>(i)]).real();
        }
        double err = 0.0;
        for (long i = 0; i < A.n; ++i) {
            err += std::norm(w[static_cast<std::size_t>(i)] - rho * v[static_cast<std::size_t>(i)]);
        }
        err = std::sqrt(err);
        res.value = rho;
        res.residual = err / std::max(std::abs(rho), 1e-30);
        if (res.residual <= rel_residual) return res;
        double wn = 0.0;
        for (const cplx& z : w) wn += std::norm(z);
        wn = std::sqrt(wn);
        if (wn < 1e-300) {  // annihilated: the operator is (numerically) zero on v
            res.value = 0.0;
            res.residual = 0.0;
            return res;
        }
        for (long i = 0; i < A.n; ++i) v[static_cast<std::size_t>(i)] = w[static_cast<std::size_t>(i)] / wn;
    }
    raise("EigenNoConvergence", "power iteration residual " + format_double(res.residual) +
                                    " above " + format_double(rel_residual) + " after " +
                                    std::to_string(max_iters) + " iterations");
}

struct ExtremeEigenvalues {
    double min_value = 0.0;
    double max_value = 0.0;
    long iterations = 0;
    double residual = 0.0;
    std::string method;
};

/// Extreme eigenvalues of a PSD Hermitian matrix: full Jacobi up to
/// `jacobi_cap`, otherwise power iteration on A for the top and on the
/// spectral reflection (1.05 max) I - A for the bottom.
inline ExtremeEigenvalues extreme_eigenvalues(const HermitianMatrix& A, long jacobi_cap = 512,
                                              std::uint64_t seed = 7) {
    ExtremeEigenvalues out;
    if (A.n <= jacobi_cap) {
        JacobiResult jr = jacobi_eigenvalues(A);
        out.min_value = jr.eigenvalues.front();
        out.max_value = jr.eigenvalues.back();
        out.iterations = jr.sweeps;
        out.residual = jr.off_norm;
        out.method = "jacobi";
        return out;
    }
    PowerResult top = power_largest(A, seed);
    double shift = 1.05 * std::max(top.value, 1e-12);
    HermitianMatrix M = A;
    for (auto& z : M.a) z = -z;
    for (long i = 0; i < M.n; ++i) M.at(i, i) += shift;
    PowerResult bottom = power_largest(M, seed + 1);
    out.max_value = top.value;
    out.min_value = shift - bottom.value;
    out.iterations = top.iterations + bottom.iterations;
    out.residual = std::max(top.residual, bottom.residual);
    out.method = "power";
    return out;
}

}  // namespace framelab
