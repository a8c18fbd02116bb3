#pragma once

// Learner-comparison statistics over per-trial fitness logs.
//
// A MetricSeries is a rectangular runs-by-trials fitness table for one
// learner/skill/body combination. Trials are indexed in evaluation order;
// conversions to simulated time are the caller's concern (see resample_step).
// All variance/std estimators are population (divide by n).

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace evolab::metrics {

struct MetricSeries {
    std::vector<std::vector<double>> runs;

    std::size_t run_count() const { return runs.size(); }
    std::size_t trial_count() const { return runs.empty() ? 0 : runs.front().size(); }

    void validate() const {
        if (runs.empty()) throw std::invalid_argument("metric series: no runs");
        for (const auto& r : runs) {
            if (r.empty()) throw std::invalid_argument("metric series: empty run");
            if (r.size() != runs.front().size())
                throw std::invalid_argument("metric series: ragged runs");
        }
    }
};

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;
};

namespace detail {

inline MeanStd mean_std(std::span<const double> v) {
    if (v.empty()) throw std::invalid_argument("mean_std: empty sample");
    double m = 0.0;
    for (double x : v) m += x;
    m /= static_cast<double>(v.size());
    double s2 = 0.0;
    for (double x : v) s2 += (x - m) * (x - m);
    s2 /= static_cast<double>(v.size());
    return {m, std::sqrt(s2)};
}

inline std::vector<double> running_max(std::span<const double> v) {
    std::vector<double> out(v.size());
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < v.size(); ++i) {
        best = std::max(best, v[i]);
        out[i] = best;
    }
    return out;
}

}  // namespace detail

// Mean best fitness: per-run running maxima, averaged across runs per trial.
// Non-decreasing by construction.
inline std::vector<double> mbf(const MetricSeries& series) {
    series.validate();
    std::vector<double> out(series.trial_count(), 0.0);
    for (const auto& run : series.runs) {
        const auto best = detail::running_max(run);
        for (std::size_t i = 0; i < best.size(); ++i) out[i] += best[i];
    }
    for (double& v : out) v /= static_cast<double>(series.run_count());
    return out;
}

// Earliest timestamp at which curve `a` drops strictly below curve `b`;
// empty when `a` stays at or above `b` on the whole grid.
inline std::optional<double> tteq(std::span<const double> mbf_a,
                                  std::span<const double> mbf_b,
                                  std::span<const double> timestamps) {
    if (mbf_a.size() != mbf_b.size() || mbf_a.size() != timestamps.size())
        throw std::invalid_argument("tteq: inputs must share one grid");
    if (mbf_a.empty()) throw std::invalid_argument("tteq: empty inputs");
    for (std::size_t i = 0; i < mbf_a.size(); ++i)
        if (mbf_a[i] < mbf_b[i]) return timestamps[i];
    return std::nullopt;
}

// Step resample of a piecewise-constant curve onto query times: the value at
// q is the last sample whose timestamp is <= q (the first sample before its
// time). Used to put learners with different trial durations on one grid.
inline std::vector<double> resample_step(std::span<const double> values,
                                         std::span<const double> times,
                                         std::span<const double> query_times) {
    if (values.size() != times.size() || values.empty())
        throw std::invalid_argument("resample_step: bad inputs");
    std::vector<double> out;
    out.reserve(query_times.size());
    for (double q : query_times) {
        const auto it = std::upper_bound(times.begin(), times.end(), q);
        const auto idx = static_cast<std::size_t>(it - times.begin());
        out.push_back(idx == 0 ? values.front() : values[idx - 1]);
    }
    return out;
}

// Weight-learning curves normalized by their own final value, plus the
// initial-state learner's combined curve: elementwise sum of its per-skill
// MBF divided by the sum of the weight learners' final MBF. All curves must
// share one trial grid; every weight-learner final must be nonzero.
struct NormalizedPerformance {
    std::vector<std::vector<double>> wo_normalized;  // per skill
    std::vector<double> iso_sigma;
};

inline NormalizedPerformance normalized_performance(
    const std::vector<std::vector<double>>& mbf_wo_per_skill,
    const std::vector<std::vector<double>>& mbf_iso_per_skill) {
    if (mbf_wo_per_skill.empty() || mbf_iso_per_skill.empty())
        throw std::invalid_argument("normalized_performance: empty inputs");
    if (mbf_wo_per_skill.size() != mbf_iso_per_skill.size())
        throw std::invalid_argument("normalized_performance: skill count mismatch");
    const std::size_t grid = mbf_wo_per_skill.front().size();
    if (grid == 0) throw std::invalid_argument("normalized_performance: empty curves");
    for (const auto& c : mbf_wo_per_skill)
        if (c.size() != grid)
            throw std::invalid_argument("normalized_performance: mismatched trial grids");
    for (const auto& c : mbf_iso_per_skill)
        if (c.size() != grid)
            throw std::invalid_argument("normalized_performance: mismatched trial grids");

    NormalizedPerformance out;
    double final_sum = 0.0;
    for (const auto& c : mbf_wo_per_skill) {
        const double final_value = c.back();
        if (final_value == 0.0)
            throw std::invalid_argument("normalized_performance: zero final best fitness");
        final_sum += final_value;
        std::vector<double> norm(grid);
        for (std::size_t i = 0; i < grid; ++i) norm[i] = c[i] / final_value;
        out.wo_normalized.push_back(std::move(norm));
    }
    out.iso_sigma.assign(grid, 0.0);
    for (const auto& c : mbf_iso_per_skill)
        for (std::size_t i = 0; i < grid; ++i) out.iso_sigma[i] += c[i];
    for (double& v : out.iso_sigma) v /= final_sum;
    return out;
}

// Average evaluations to solution: per run, the 1-based index of the first
// trial attaining that run's final best fitness; mean and population std
// across runs.
struct AesResult {
    double mean = 0.0;
    double std = 0.0;
    std::vector<std::size_t> per_run;  // 1-based indices
};

inline AesResult aes(const MetricSeries& series) {
    series.validate();
    AesResult out;
    std::vector<double> idx;
    for (const auto& run : series.runs) {
        const double final_best = *std::max_element(run.begin(), run.end());
        const auto it = std::find(run.begin(), run.end(), final_best);
        const std::size_t first = static_cast<std::size_t>(it - run.begin()) + 1;
        out.per_run.push_back(first);
        idx.push_back(static_cast<double>(first));
    }
    const auto ms = detail::mean_std(idx);
    out.mean = ms.mean;
    out.std = ms.std;
    return out;
}

// Cross-morphology robustness (population variance of per-morphology means)
// and per-morphology consistency (std over runs, summarized mean +- std
// across morphologies), for both final best fitness and AES.
struct RobustnessConsistency {
    double rob_mbf = 0.0;
    double rob_aes = 0.0;
    MeanStd con_mbf;
    MeanStd con_aes;
};

inline RobustnessConsistency robustness_consistency(
    const std::map<std::string, MetricSeries>& per_morphology) {
    if (per_morphology.size() < 2)
        throw std::invalid_argument("robustness_consistency: need >= 2 morphologies");
    std::vector<double> mean_final, mean_aes, std_final, std_aes;
    for (const auto& [name, series] : per_morphology) {
        series.validate();
        if (series.run_count() < 2)
            throw std::invalid_argument("robustness_consistency: need >= 2 runs per morphology");
        std::vector<double> finals;
        for (const auto& run : series.runs)
            finals.push_back(*std::max_element(run.begin(), run.end()));
        const auto f = detail::mean_std(finals);
        mean_final.push_back(f.mean);
        std_final.push_back(f.std);

        const auto a = aes(series);
        mean_aes.push_back(a.mean);
        std::vector<double> aes_idx(a.per_run.begin(), a.per_run.end());
        std_aes.push_back(detail::mean_std(aes_idx).std);
    }
    RobustnessConsistency out;
    const auto rf = detail::mean_std(mean_final);
    const auto ra = detail::mean_std(mean_aes);
    out.rob_mbf = rf.std * rf.std;
    out.rob_aes = ra.std * ra.std;
    out.con_mbf = detail::mean_std(std_final);
    out.con_aes = detail::mean_std(std_aes);
    return out;
}

}  // namespace evolab::metrics
