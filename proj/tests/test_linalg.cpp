#include <catch2/catch_amalgamated.hpp>

#include <framelab/linalg.hpp>

using namespace framelab;

namespace {

HermitianMatrix random_psd(long n, std::uint64_t seed) {
    // G* G for a random complex G is Hermitian positive semidefinite
    SplitMix64 rng(seed);
    std::vector<cplx> g(static_cast<std::size_t>(n * n));
    for (auto& z : g) z = {rng.next_in(-1.0, 1.0), rng.next_in(-1.0, 1.0)};
    HermitianMatrix A(n);
    for (long i = 0; i < n; ++i) {
        for (long j = 0; j < n; ++j) {
            cplx acc{0.0, 0.0};
            for (long k = 0; k < n; ++k) {
                acc += std::conj(g[static_cast<std::size_t>(k * n + i)]) *
                       g[static_cast<std::size_t>(k * n + j)];
            }
            A.at(i, j) = acc;
        }
    }
    return A;
}

}  // namespace

TEST_CASE("jacobi solves a known 2x2 complex pair") {
    HermitianMatrix A(2);
    A.at(0, 0) = {2.0, 0.0};
    A.at(1, 1) = {2.0, 0.0};
    A.at(0, 1) = {0.0, 1.0};
    A.at(1, 0) = {0.0, -1.0};
    JacobiResult r = jacobi_eigenvalues(A);
    REQUIRE(r.eigenvalues.size() == 2);
    CHECK(std::abs(r.eigenvalues[0] - 1.0) < 1e-12);
    CHECK(std::abs(r.eigenvalues[1] - 3.0) < 1e-12);
}

TEST_CASE("jacobi solves a known 3x3 real symmetric matrix") {
    // eigenvalues of [[2,1,0],[1,2,1],[0,1,2]] are 2 and 2 +- sqrt(2)
    HermitianMatrix A(3);
    A.at(0, 0) = A.at(1, 1) = A.at(2, 2) = {2.0, 0.0};
    A.at(0, 1) = A.at(1, 0) = A.at(1, 2) = A.at(2, 1) = {1.0, 0.0};
    JacobiResult r = jacobi_eigenvalues(A);
    CHECK(std::abs(r.eigenvalues[0] - (2.0 - std::sqrt(2.0))) < 1e-12);
    CHECK(std::abs(r.eigenvalues[1] - 2.0) < 1e-12);
    CHECK(std::abs(r.eigenvalues[2] - (2.0 + std::sqrt(2.0))) < 1e-12);
}

TEST_CASE("jacobi preserves the spectral invariants") {
    HermitianMatrix A = random_psd(24, 5);
    double tr = A.trace_real();
    double fro = A.frobenius();
    JacobiResult r = jacobi_eigenvalues(A);
    CHECK(r.off_norm <= 1e-10);
    double sum = 0.0, sumsq = 0.0;
    for (double ev : r.eigenvalues) {
        CHECK(ev > -1e-10);  // PSD
        sum += ev;
        sumsq += ev * ev;
    }
    CHECK(std::abs(sum - tr) < 1e-9 * std::max(1.0, std::abs(tr)));
    CHECK(std::abs(std::sqrt(sumsq) - fro) < 1e-9 * std::max(1.0, fro));
    CHECK(std::is_sorted(r.eigenvalues.begin(), r.eigenvalues.end()));
}

TEST_CASE("identity needs no sweeps") {
    HermitianMatrix A(8);
    for (long i = 0; i < 8; ++i) A.at(i, i) = {1.0, 0.0};
    JacobiResult r = jacobi_eigenvalues(A);
    CHECK(r.sweeps == 0);
    CHECK(r.eigenvalues.front() == 1.0);
    CHECK(r.eigenvalues.back() == 1.0);
}

TEST_CASE("power iteration matches jacobi on the top eigenvalue") {
    HermitianMatrix A = random_psd(40, 9);
    JacobiResult full = jacobi_eigenvalues(A);
    PowerResult top = power_largest(A);
    CHECK(std::abs(top.value - full.eigenvalues.back()) < 1e-6 * full.eigenvalues.back());
    CHECK(top.residual <= 1e-8);
    CHECK(top.iterations > 0);
}

TEST_CASE("power iteration reports zero on the zero matrix") {
    HermitianMatrix Z(6);
    PowerResult r = power_largest(Z);
    CHECK(r.value == 0.0);
}

TEST_CASE("extreme eigenvalues agree between methods") {
    // near-diagonal matrix with well separated eigenvalues, so both the top
    // and the reflected bottom power iterations converge quickly
    HermitianMatrix A(36);
    for (long i = 0; i < 36; ++i) A.at(i, i) = {static_cast<double>(i + 1), 0.0};
    for (long i = 0; i + 1 < 36; ++i) {
        A.at(i, i + 1) = {0.01, 0.005};
        A.at(i + 1, i) = {0.01, -0.005};
    }
    ExtremeEigenvalues direct = extreme_eigenvalues(A, 512);
    ExtremeEigenvalues iterative = extreme_eigenvalues(A, 8);  // force the power path
    CHECK(direct.method == "jacobi");
    CHECK(iterative.method == "power");
    double scale = std::max(1.0, direct.max_value);
    CHECK(std::abs(direct.max_value - iterative.max_value) < 1e-5 * scale);
    CHECK(std::abs(direct.min_value - iterative.min_value) < 1e-4 * scale);
    CHECK(direct.min_value > 0.9);
    CHECK(direct.min_value <= direct.max_value);
}

TEST_CASE("apply computes the matrix-vector product") {
    HermitianMatrix A(2);
    A.at(0, 0) = {1.0, 0.0};
    A.at(0, 1) = {0.0, 1.0};
    A.at(1, 0) = {0.0, -1.0};
    A.at(1, 1) = {2.0, 0.0};
    std::vector<cplx> v = {{1.0, 0.0}, {0.0, 1.0}};
    std::vector<cplx> w = A.apply(v);
    CHECK(std::abs(w[0] - cplx{0.0, 0.0}) < 1e-15);  // 1*1 + i*i = 0
    CHECK(std::abs(w[1] - cplx{0.0, 1.0}) < 1e-15);  // -i*1 + 2i = i
}
