// SPDX-License-Identifier: Apache-2.0
#include "fenn/reference.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/chi_squared.hpp>

#include "fenn/errors.hpp"

namespace fenn {

AlifTrace alif_reference(const AlifParams& params,
                         const std::vector<std::array<double, kLanes>>& input)
{
    const double alpha = params.alpha();
    const double rho = params.rho();
    AlifTrace trace;
    trace.v.reserve(input.size());
    trace.a.reserve(input.size());
    trace.s.reserve(input.size());

    std::array<double, kLanes> v{};
    std::array<double, kLanes> a{};
    for (const auto& current : input) {
        uint32_t mask = 0;
        for (int l = 0; l < kLanes; ++l) {
            const bool spike = v[size_t(l)] >= params.v_th + params.beta * a[size_t(l)];
            mask |= uint32_t(spike) << l;
            v[size_t(l)] = alpha * v[size_t(l)] + current[size_t(l)]
                           - (spike ? params.v_th : 0.0);
            a[size_t(l)] = rho * a[size_t(l)] + (spike ? 1.0 : 0.0);
        }
        trace.v.push_back(v);
        trace.a.push_back(a);
        trace.s.push_back(mask);
    }
    return trace;
}

double nrmse(const std::vector<double>& reference, const std::vector<double>& test)
{
    if (reference.size() != test.size())
        throw OutOfRangeError("series length mismatch in error computation");
    if (reference.empty()) throw OutOfRangeError("empty series in error computation");
    const auto [lo, hi] = std::minmax_element(reference.begin(), reference.end());
    const double range = *hi - *lo;
    if (range == 0.0) throw DegenerateRangeError("constant reference series");
    double sum = 0.0;
    for (size_t t = 0; t < reference.size(); ++t) {
        const double e = reference[t] - test[t];
        sum += e * e;
    }
    return std::sqrt(sum / double(reference.size())) / range;
}

double poisson_pmf(int k, double lambda)
{
    if (k < 0) return 0.0;
    if (lambda == 0.0) return k == 0 ? 1.0 : 0.0;
    return std::exp(double(k) * std::log(lambda) - lambda - std::lgamma(double(k) + 1.0));
}

namespace {

ChiSquareResult finish(std::vector<double> expected, std::vector<double> observed,
                       double significance)
{
    if (expected.size() < 2)
        throw DegenerateRangeError("too few bins for a chi-square test");
    ChiSquareResult result;
    for (size_t b = 0; b < expected.size(); ++b) {
        const double d = observed[b] - expected[b];
        result.statistic += d * d / expected[b];
    }
    result.dof = int(expected.size()) - 1;
    const boost::math::chi_squared distribution(result.dof);
    result.critical = boost::math::quantile(boost::math::complement(distribution, significance));
    result.reject = result.statistic > result.critical;
    return result;
}

} // namespace

ChiSquareResult chi_square_gof_poisson(const std::vector<uint64_t>& counts, double lambda,
                                       double significance)
{
    double n = 0.0;
    for (uint64_t c : counts) n += double(c);
    if (n == 0.0) throw DegenerateRangeError("no samples for a chi-square test");

    // Greedy left-to-right merge so every bin expects at least 5; the open
    // upper tail joins the last bin.
    std::vector<double> expected;
    std::vector<double> observed;
    double bin_expected = 0.0;
    double bin_observed = 0.0;
    double cumulative = 0.0;
    for (size_t k = 0; k < counts.size(); ++k) {
        const double p = poisson_pmf(int(k), lambda);
        cumulative += p;
        bin_expected += n * p;
        bin_observed += double(counts[k]);
        if (bin_expected >= 5.0) {
            expected.push_back(bin_expected);
            observed.push_back(bin_observed);
            bin_expected = bin_observed = 0.0;
        }
    }
    bin_expected += n * std::max(0.0, 1.0 - cumulative);
    if (expected.empty())
        throw DegenerateRangeError("too few samples for a chi-square test");
    if (bin_expected >= 5.0) {
        expected.push_back(bin_expected);
        observed.push_back(bin_observed);
    } else {
        expected.back() += bin_expected;
        observed.back() += bin_observed;
    }
    return finish(std::move(expected), std::move(observed), significance);
}

ChiSquareResult chi_square_gof_uniform(const std::vector<uint64_t>& counts,
                                       double significance)
{
    double n = 0.0;
    for (uint64_t c : counts) n += double(c);
    if (n == 0.0) throw DegenerateRangeError("no samples for a chi-square test");
    std::vector<double> expected(counts.size(), n / double(counts.size()));
    std::vector<double> observed(counts.size());
    for (size_t b = 0; b < counts.size(); ++b) observed[b] = double(counts[b]);
    return finish(std::move(expected), std::move(observed), significance);
}

int HostRng::next_poisson(double lambda)
{
    const double limit = std::exp(-lambda);
    int k = 0;
    double p = 1.0;
    do {
        ++k;
        p *= next_double();
    } while (p > limit);
    return k - 1;
}

} // namespace fenn
