#pragma once

#include <cstdint>
#include <vector>

#include "lobvol/series.hpp"

namespace lobvol {

struct ClusterProbEstimate {
    double q = 99.0;
    double r_q = 0.0;       // nearest-rank q-th percentile of |r|
    double baseline = 0.0;  // 1 - q/100
    int max_tau = 0;
    std::vector<double> p;           // P_tau^q; NaN where the denominator is 0
    std::vector<std::size_t> pairs;  // numerator: exceedances with exceeding partner
    std::vector<std::size_t> n;      // denominator: exceedances with a valid partner slot
    std::vector<double> band_low;    // exact binomial band around the baseline
    std::vector<double> band_high;
    double band_level = 0.99;
    std::size_t exceedances = 0;  // total count above threshold
    bool low_sample = false;      // exceedances < 100

    double at(int tau) const { return p[static_cast<std::size_t>(tau - 1)]; }
};

// Nearest-rank q-th percentile of the valid absolute returns. q in (0,100).
double threshold_percentile(const ReturnSeries& abs_returns, double q);

// Conditional exceedance probability per Eq. of the clustering procedure:
// strict inequality at the threshold; an exceedance enters the denominator at
// lag tau only when slot t+tau is valid and in the same segment.
ClusterProbEstimate cluster_prob(const ReturnSeries& abs_returns, double q, int max_tau,
                                 double band_level = 0.99);

}  // namespace lobvol
