// stats.hpp — suite metrics and the nonparametric tests used to compare
// generators and search configurations.
#ifndef RIGAA_STATS_HPP_
#define RIGAA_STATS_HPP_

#include <string>
#include <vector>

#include "rigaa/diversity.hpp"
#include "rigaa/scenario.hpp"

namespace rigaa::stats {

struct SuiteMetrics {
  double f_av = 0.0;    // mean |F1|
  double f_avs = 0.0;   // mean |R_s| (identical to f_av in surrogate mode)
  double d_av = 0.0;    // mean pairwise Jaccard distance
  double best_f1 = 0.0; // max |F1|
};

enum class EffectMagnitude { negligible, small, medium, large };

struct TestResult {
  double p_value = 1.0;
  double delta = 0.0;
  EffectMagnitude magnitude = EffectMagnitude::negligible;
};

SuiteMetrics suite_metrics(const std::vector<Individual>& suite,
                           const diversity::SimilarityThresholds& th);

// Two-sided Mann-Whitney U. Exact enumeration over rank assignments when
// min(|a|, |b|) < 8, tie-corrected normal approximation with continuity
// correction otherwise. Throws SampleTooSmall below 3 observations.
double mann_whitney_u(const std::vector<double>& a,
                      const std::vector<double>& b);

// delta = (#(a>b) - #(a<b)) / (|a| * |b|) over all cross pairs.
double cliffs_delta(const std::vector<double>& a,
                    const std::vector<double>& b);

// |delta| thresholds 0.147 / 0.33 / 0.474.
EffectMagnitude delta_magnitude(double delta);
char magnitude_label(EffectMagnitude magnitude);

TestResult compare_samples(const std::vector<double>& a,
                           const std::vector<double>& b);

}  // namespace rigaa::stats

#endif  // RIGAA_STATS_HPP_
