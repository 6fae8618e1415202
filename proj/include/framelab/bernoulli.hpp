#pragma once

#include <vector>

#include "common.hpp"
#include "fourier.hpp"
#include "ifs.hpp"

namespace framelab {

struct BernoulliDensityEstimate {
    double lambda = 0.5;
    int n_terms = 0;
    std::vector<double> xs;
    std::vector<double> values;
    double max_imag = 0.0;  // sanity residual of the reconstruction
};

/// Density reconstruction for the Bernoulli convolution nu_lambda with
/// lambda in [1/2, 1): the support sits inside [0,1], so the 1-periodization
/// phi_per(x) = sum_{|n| <= N} nu_hat(n) e^{2 pi i n x} converges to the
/// density wherever one exists. Coefficients come from the truncated product
/// formula; positive and negative frequencies are evaluated independently so
/// the imaginary residual is a real consistency check rather than zero by
/// construction.
inline BernoulliDensityEstimate bernoulli_density_estimate(double lambda,
                                                           const std::vector<double>& x_grid,
                                                           int n_terms, double tol = 1e-10) {
    require(lambda >= 0.5 && lambda < 1.0, "UnsupportedLambda",
            "density reconstruction needs lambda in [1/2, 1) so the support fits one period");
    require(n_terms >= 8, "BadTerms", "need at least 8 reconstruction terms");
    require(!x_grid.empty(), "BadGrid", "need at least one evaluation point");
    IFSSystem sys = make_bernoulli(lambda);
    std::vector<cplx> coeff(static_cast<std::size_t>(2 * n_terms + 1));
    for (int n = -n_terms; n <= n_terms; ++n) {
        coeff[static_cast<std::size_t>(n + n_terms)] =
            ft_selfsimilar(sys, static_cast<double>(n), tol).value;
    }
    BernoulliDensityEstimate out;
    out.lambda = lambda;
    out.n_terms = n_terms;
    out.xs = x_grid;
    out.values.reserve(x_grid.size());
    for (double x : x_grid) {
        cplx acc{0.0, 0.0};
        for (int n = -n_terms; n <= n_terms; ++n) {
            acc += coeff[static_cast<std::size_t>(n + n_terms)] *
                   cis_turns(static_cast<double>(n) * x);
        }
        out.values.push_back(acc.real());
        out.max_imag = std::max(out.max_imag, std::abs(acc.imag()));
    }
    return out;
}

}  // namespace framelab
