// Acceptance gate: every numbered criterion below must hold at the stated
// tolerance within its wall-clock budget. Each one prints a [PASS] line;
// the first violation prints [FAIL] with its location and exits nonzero.
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "framelab/framelab.hpp"

namespace {

#define REQUIRE(cond, msg)                                                      \
    do {                                                                        \
        if (!(cond)) {                                                          \
            std::cerr << "[FAIL] " << __FILE__ << ":" << __LINE__ << " " << msg \
                      << "\n";                                                  \
            std::exit(1);                                                       \
        }                                                                       \
    } while (0)

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string out_dir(const std::string& name) {
    std::filesystem::path dir =
        std::filesystem::temp_directory_path() / "framelab_acceptance" / name;
    return dir.string();
}

framelab::PresetOutcome run(const std::string& name) {
    framelab::PresetOutcome outcome =
        framelab::run_preset(name, framelab::Config{}, out_dir(name));
    for (const framelab::CheckResult& c : outcome.report.checks) {
        REQUIRE(c.pass, name + " check \"" + c.name + "\" failed: " + c.criterion +
                            " (value " + framelab::format_double(c.value) + ")");
    }
    REQUIRE(outcome.exit_code() == 0, name + " exited nonzero");
    REQUIRE(!outcome.files.empty() && std::filesystem::exists(outcome.files.front()),
            name + " wrote no report.json");
    return outcome;
}

double g_parseval_A = 0.0;

void criterion1() {
    auto t0 = Clock::now();
    framelab::PresetOutcome o = run("parseval");
    double A = o.report.results["A_est"].get<double>();
    double B = o.report.results["B_est"].get<double>();
    REQUIRE(o.report.inputs["grid"].get<long>() == 256, "parseval grid is not 256");
    REQUIRE(std::abs(A - 1.0) <= 1e-8, "A_est differs from 1 by more than 1e-8");
    REQUIRE(std::abs(B - 1.0) <= 1e-8, "B_est differs from 1 by more than 1e-8");
    g_parseval_A = A;
    double secs = elapsed(t0);
    REQUIRE(secs < 5.0, "criterion 1 exceeded 5 s");
    std::cout << "[PASS] criterion 1: Parseval tight frame, A = " << A << ", B = " << B
              << " (" << secs << " s)\n";
}

void criterion2() {
    auto t0 = Clock::now();
    framelab::PresetOutcome o = run("oversample");
    double A = o.report.results["A_est"].get<double>();
    double B = o.report.results["B_est"].get<double>();
    REQUIRE(A >= 1.95 && A <= 2.05, "A_est outside [1.95, 2.05]");
    REQUIRE(B >= 1.95 && B <= 2.05, "B_est outside [1.95, 2.05]");
    double secs = elapsed(t0);
    REQUIRE(secs < 30.0, "criterion 2 exceeded 30 s");
    std::cout << "[PASS] criterion 2: half-integer oversampling, A = " << A << ", B = " << B
              << " (" << secs << " s)\n";
}

void criterion3() {
    auto t0 = Clock::now();
    framelab::PresetOutcome o = run("landau");
    const framelab::json& trace = o.report.results["trace"];
    REQUIRE(trace.size() == 3, "landau trace does not have 3 levels");
    REQUIRE(trace[0]["grid"].get<long>() == 512, "landau base grid is not 512");
    double A0 = trace[0]["A_est"].get<double>();
    REQUIRE(A0 < 0.25 * g_parseval_A, "base-grid A_est is not below a quarter of criterion 1's");
    for (std::size_t i = 1; i < trace.size(); ++i) {
        double prev = trace[i - 1]["A_est"].get<double>();
        double cur = trace[i]["A_est"].get<double>();
        REQUIRE(cur <= prev + 1e-9, "A_est increased across a refinement");
    }
    double secs = elapsed(t0);
    REQUIRE(secs < 60.0, "criterion 3 exceeded 60 s");
    std::cout << "[PASS] criterion 3: undersampled lower bound collapses, A = " << A0
              << " at grid 512, non-increasing over 3 levels (" << secs << " s)\n";
}

void criterion4() {
    auto t0 = Clock::now();
    framelab::PresetOutcome o = run("seip");
    const framelab::json& trace = o.report.results["trace"];
    REQUIRE(trace.size() == 3, "seip trace does not have 3 levels");
    double lo = framelab::inf, hi = -framelab::inf;
    for (const framelab::json& row : trace) {
        double a = row["A_est"].get<double>();
        REQUIRE(a >= 0.05, "A_est below 0.05 at a refinement level");
        lo = std::min(lo, a);
        hi = std::max(hi, a);
    }
    REQUIRE(hi - lo <= 0.2 * hi, "A_est spread exceeds 20% across refinements");
    double dminus = o.report.results["d_minus_est"].get<double>();
    REQUIRE(dminus > 1.05, "lower Beurling density not above 1");
    double secs = elapsed(t0);
    REQUIRE(secs < 60.0, "criterion 4 exceeded 60 s");
    std::cout << "[PASS] criterion 4: dense jittered lattice keeps A in ["
              << lo << ", " << hi << "], D- = " << dminus << " (" << secs << " s)\n";
}

void criterion5() {
    auto t0 = Clock::now();
    framelab::PresetOutcome o = run("example51");
    double maxv = o.report.results["max_sum"].get<double>();
    double minv = o.report.results["min_sum"].get<double>();
    double argmax = o.report.results["argmax"].get<double>();
    double argmin = o.report.results["argmin"].get<double>();
    REQUIRE(std::abs(maxv - 1.0) <= 1e-4, "scan maximum differs from 1 by more than 1e-4");
    REQUIRE(std::abs(argmax) <= 1e-12, "scan maximum not attained at an integer");
    REQUIRE(std::abs(minv - 1.0 / 3.0) <= 1e-3, "scan minimum differs from 1/3 by more than 1e-3");
    REQUIRE(std::abs(argmin - 0.5) <= 1e-12, "scan minimum not attained at 1/2");
    REQUIRE(minv >= std::pow(2.0 / framelab::pi, 4), "scan minimum below (2/pi)^4");
    double secs = elapsed(t0);
    REQUIRE(secs < 10.0, "criterion 5 exceeded 10 s");
    std::cout << "[PASS] criterion 5: triangle periodization, max = " << maxv
              << " at 0, min = " << minv << " at 1/2 (" << secs << " s)\n";
}

double ratio_from(const framelab::json& rows, int k) {
    for (const framelab::json& row : rows) {
        if (row["k"].get<int>() == k) {
            REQUIRE(!row["empty"].get<bool>(), "band k=" + std::to_string(k) + " is empty");
            return row["ratio"].get<double>();
        }
    }
    REQUIRE(false, "band k=" + std::to_string(k) + " missing from the report");
    return 0.0;
}

void criterion6() {
    auto t0 = Clock::now();
    framelab::PresetOutcome o = run("triangle-noframe");
    const framelab::json& rows = o.report.results["ratios"];
    const int ks[] = {2, 4, 8, 16, 32};
    double prev = framelab::inf;
    for (int k : ks) {
        double r = ratio_from(rows, k);
        REQUIRE(r < prev, "R_k not strictly decreasing at k=" + std::to_string(k));
        prev = r;
    }
    double head = ratio_from(rows, 2), tail = ratio_from(rows, 32);
    REQUIRE(tail < 0.2 * head, "R_32 / R_2 is not below 0.2");
    REQUIRE(o.report.results["verdict"] == "NoFrame_LowerUnbounded", "verdict mismatch");
    double secs = elapsed(t0);
    REQUIRE(secs < 60.0, "criterion 6 exceeded 60 s");
    std::cout << "[PASS] criterion 6: thin-band ratios collapse, R_32/R_2 = " << tail / head
              << " (" << secs << " s)\n";
}

void criterion7() {
    auto t0 = Clock::now();
    framelab::PresetOutcome o = run("invsqrt-noframe");
    const framelab::json& rows = o.report.results["ratios"];
    const int ks[] = {2, 4, 8, 16};
    double prev = framelab::inf;
    for (int k : ks) {
        double r = ratio_from(rows, k);
        REQUIRE(r < prev, "U_k not decreasing at k=" + std::to_string(k));
        prev = r;
    }
    double head = ratio_from(rows, 2), tail = ratio_from(rows, 16);
    REQUIRE(tail < 0.3 * head, "U_16 / U_2 is not below 0.3");
    REQUIRE(o.report.results["verdict"] == "NoFrame_UpperUnbounded", "verdict mismatch");
    double secs = elapsed(t0);
    REQUIRE(secs < 60.0, "criterion 7 exceeded 60 s");
    std::cout << "[PASS] criterion 7: tall-band ratios collapse, U_16/U_2 = " << tail / head
              << " (" << secs << " s)\n";
}

void criterion8() {
    auto t0 = Clock::now();
    framelab::PresetOutcome o = run("prop24");
    double eps = o.report.results["epsilon"].get<double>();
    REQUIRE(eps >= 0.155 && eps <= 0.1604, "epsilon outside [0.155, 0.1604]");
    const framelab::json& trace = o.report.results["trace"];
    REQUIRE(trace.size() == 3, "prop24 trace does not have 3 levels");
    REQUIRE(trace[0]["grid"].get<long>() == 128, "prop24 base grid is not 128");
    double lo = framelab::inf, hi = -framelab::inf;
    for (const framelab::json& row : trace) {
        double a = row["A_est"].get<double>();
        REQUIRE(a > 0.0, "A_est not positive at a refinement level");
        lo = std::min(lo, a);
        hi = std::max(hi, a);
    }
    REQUIRE(hi - lo <= 0.2 * hi, "A_est spread exceeds 20% across refinements");
    double secs = elapsed(t0);
    REQUIRE(secs < 60.0, "criterion 8 exceeded 60 s");
    std::cout << "[PASS] criterion 8: epsilon = " << eps << ", A in [" << lo << ", " << hi
              << "] on the shrunken support (" << secs << " s)\n";
}

void criterion9() {
    auto t0 = Clock::now();
    framelab::PresetOutcome o = run("mass-decay");
    const framelab::json& masses = o.report.results["masses"];
    int checked = 0;
    for (const framelab::json& row : masses) {
        int n = row["n"].get<int>();
        if (n < 4 || n > 10) continue;
        REQUIRE(row.contains("ratio_next"), "missing ratio at n=" + std::to_string(n));
        REQUIRE(row["ratio_next"].get<double>() == 0.5,
                "mass ratio at n=" + std::to_string(n) + " is not exactly 1/2");
        ++checked;
    }
    REQUIRE(checked == 7, "ratios were not checked for every n in 4..10");
    for (const framelab::json& row : o.report.results["monte_carlo"]) {
        double rec = row["recursion"].get<double>();
        double mc = row["monte_carlo"].get<double>();
        double sigma = row["sigma"].get<double>();
        REQUIRE(std::abs(rec - mc) <= 3.0 * sigma, "Monte-Carlo disagrees beyond 3 sigma");
    }
    double secs = elapsed(t0);
    REQUIRE(secs < 30.0, "criterion 9 exceeded 30 s");
    std::cout << "[PASS] criterion 9: near-zero mass halves exactly for n in 4..10, "
                 "Monte-Carlo within 3 sigma (" << secs << " s)\n";
}

void criterion10() {
    auto t0 = Clock::now();
    framelab::PresetOutcome o = run("bernoulli-tile");
    const framelab::json& verdicts = o.report.results["verdicts"];
    REQUIRE(verdicts.size() == 4, "expected four tile cases");
    for (const framelab::json& row : verdicts) {
        REQUIRE(row["verdict"] == row["expected"],
                std::string("tile case ") + row["case"].get<std::string>() + " produced " +
                    row["verdict"].get<std::string>());
    }
    double secs = elapsed(t0);
    REQUIRE(secs < 30.0, "criterion 10 exceeded 30 s");
    std::cout << "[PASS] criterion 10: all four tile verdicts match (" << secs << " s)\n";
}

void criterion11() {
    auto t0 = Clock::now();
    framelab::PresetOutcome o = run("translate");
    const framelab::json& rows = o.report.results["translations"];
    REQUIRE(rows.size() == 3, "expected three random translations");
    double worst = 0.0;
    for (const framelab::json& row : rows) {
        worst = std::max(worst, row["deltaA"].get<double>());
        worst = std::max(worst, row["deltaB"].get<double>());
    }
    REQUIRE(worst <= 1e-8, "a frame bound moved under translation");
    double secs = elapsed(t0);
    REQUIRE(secs < 30.0, "criterion 11 exceeded 30 s");
    std::cout << "[PASS] criterion 11: translation invariance, worst delta = " << worst
              << " (" << secs << " s)\n";
}

void criterion12() {
    using namespace framelab;
    auto t0 = Clock::now();

    // Monotonicity: growing the frequency set can only grow both Rayleigh
    // extremes, checked along a chain of 50 random extensions.
    Measure1D m = make_density_measure(uniform_density(0.0, 1.0), {0.0, 1.0}, 32);
    Interval big{-40.0, 40.0};
    std::vector<double> pts;
    for (long k = -16; k < 16; ++k) pts.push_back(static_cast<double>(k));
    Spectrum cur = make_spectrum(pts, big);
    FrameBoundsReport prev = frame_bounds(m, cur, 32);
    std::vector<Spectrum> generated = {cur};
    SplitMix64 rng = substream(20260818, 0);
    for (int i = 0; i < 50; ++i) {
        int add = 1 + (i % 5);
        for (int j = 0; j < add; ++j) pts.push_back(rng.next_in(-40.0, 40.0));
        cur = make_spectrum(pts, big);
        FrameBoundsReport fb = frame_bounds(m, cur, 32);
        REQUIRE(fb.A_est >= prev.A_est - 1e-10,
                "A_est dropped after extension " + std::to_string(i));
        REQUIRE(fb.B_est >= prev.B_est - 1e-10,
                "B_est dropped after extension " + std::to_string(i));
        prev = fb;
        if (i % 10 == 9) generated.push_back(cur);
    }
    std::cout << "[PASS] criterion 12a: frame bounds monotone over 50 random extensions, "
                 "final |spectrum| = " << cur.size() << "\n";

    // Conjugate symmetry of the transform across all measure variants.
    std::vector<Measure1D> measures;
    measures.push_back(make_density_measure(uniform_density(0.3, 1.7), {0.3, 1.7}, 256));
    measures.push_back(make_density_measure(triangle_density(), {-1.0, 1.0}, 256));
    measures.push_back(make_selfsimilar_measure(make_bernoulli(0.7)));
    measures.push_back(make_selfsimilar_measure(make_bernoulli(0.5)));
    SplitMix64 rng_xi = substream(20260818, 1);
    double worst_sym = 0.0;
    for (int i = 0; i < 100; ++i) {
        double xi = rng_xi.next_in(-40.0, 40.0);
        const Measure1D& mi = measures[static_cast<std::size_t>(i) % measures.size()];
        cplx a = ft(mi, xi, 1e-9).value;
        cplx b = ft(mi, -xi, 1e-9).value;
        double dev = std::abs(b - std::conj(a));
        worst_sym = std::max(worst_sym, dev);
        REQUIRE(dev <= 1e-9, "conjugate symmetry violated at xi = " + format_double(xi));
    }
    std::cout << "[PASS] criterion 12b: conjugate symmetry over 100 random frequencies, "
                 "worst residual = " << worst_sym << "\n";

    // Self-similarity: mu(E) = (1/l) sum_j mu(f_j^{-1}(E)) compared through
    // two independent sampling streams at a 3-sigma tolerance.
    IFSSystem sys = make_bernoulli(0.6);
    const std::size_t n_samples = 200000;
    std::vector<double> left = sample_measure(sys, n_samples, 40, 101);
    std::vector<double> right = sample_measure(sys, n_samples, 40, 202);
    SplitMix64 rng_iv = substream(20260818, 2);
    for (int t = 0; t < 20; ++t) {
        double a = rng_iv.next_in(0.0, 0.9);
        double b = a + rng_iv.next_in(0.05, 1.0 - a);
        std::size_t hits = 0;
        for (double x : left) {
            if (x >= a && x < b) ++hits;
        }
        double lhs = static_cast<double>(hits) / static_cast<double>(n_samples);
        double var_l = lhs * (1.0 - lhs) / static_cast<double>(n_samples);
        double sum = 0.0, sumsq = 0.0;
        for (double x : right) {
            double z = 0.0;
            for (double d : sys.digits) {
                double y = sys.lambda * x + d;
                if (y >= a && y < b) z += 1.0;
            }
            z /= static_cast<double>(sys.branch_count());
            sum += z;
            sumsq += z * z;
        }
        double rhs = sum / static_cast<double>(n_samples);
        double var_r = (sumsq / static_cast<double>(n_samples) - rhs * rhs) /
                       static_cast<double>(n_samples);
        double tol = 3.0 * std::sqrt(var_l + std::max(var_r, 0.0)) + 1e-9;
        REQUIRE(std::abs(lhs - rhs) <= tol,
                "self-similarity identity off by " + format_double(std::abs(lhs - rhs)) +
                    " (tol " + format_double(tol) + ") on [" + format_double(a) + ", " +
                    format_double(b) + ")");
    }
    std::cout << "[PASS] criterion 12c: self-similarity identity on 20 random intervals\n";

    // Density ordering D- <= D+ on every spectrum this suite generated plus
    // jittered, shifted, and union constructions.
    generated.push_back(jittered_lattice(1.0 / 1.2, 0.15, 7, {-32.0, 32.0}));
    generated.push_back(lattice(0.5, 0.25, {-16.0, 16.0}));
    generated.push_back(
        union_spectrum(lattice(1.0, 0.0, {-8.0, 8.0}), jittered_lattice(1.0, 0.2, 9, {-8.0, 8.0})));
    for (const Spectrum& s : generated) {
        double width = s.window.length();
        DensityCounts dc = beurling_density(s, {width / 8.0, width / 4.0});
        REQUIRE(dc.d_minus_est <= dc.d_plus_est + 1e-12,
                "lower density exceeds upper density for " + s.provenance);
    }
    std::cout << "[PASS] criterion 12d: D- <= D+ on " << generated.size()
              << " generated spectra\n";

    double secs = elapsed(t0);
    REQUIRE(secs < 120.0, "criterion 12 exceeded 120 s");
    std::cout << "[PASS] criterion 12: property suites complete (" << secs << " s)\n";
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    criterion10();
    criterion11();
    criterion12();
    std::cout << "[PASS] all 12 acceptance criteria\n";
    return 0;
}
