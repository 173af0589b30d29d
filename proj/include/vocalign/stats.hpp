#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vocalign/repo_metrics.hpp"

namespace vocalign::stats {

struct Correlation {
    double r = 0.0;
    double p = 1.0;
};

// Sample correlation with a two-sided p-value from the Student-t tail,
// t = r*sqrt((n-2)/(1-r^2)), df = n-2. Throws DegenerateInput for n < 3,
// length mismatch, or zero variance.
Correlation pearson(std::span<const double> x, std::span<const double> y);

// Pearson correlation of mid-rank vectors; same t-approximation for p.
Correlation spearman(std::span<const double> x, std::span<const double> y);

// Mid-ranks (ties get the average of the ranks they occupy), 1-based.
std::vector<double> midranks(std::span<const double> values);

struct MannWhitney {
    double u = 0.0;
    double p = 1.0;
    bool exact = false;
};

// U = #{(i,j): a_i > b_j} + 0.5 * #ties. Exact two-sided p (doubled one
// tail, capped at 1) from the null distribution when n1+n2 <= 25 and the
// pooled sample is tie-free; otherwise normal approximation with tie
// correction and continuity correction.
MannWhitney mann_whitney(std::span<const double> a, std::span<const double> b);

// Null distribution of U for group sizes (n1, n2): counts[u] = number of
// rank assignments with statistic u, computed by dynamic programming.
std::vector<std::uint64_t> u_distribution(int n1, int n2);

// Two-sided exact p for an observed u under the (n1, n2) null.
double exact_u_two_sided(double u, int n1, int n2);

// Numeric kernels, exposed for verification against reference fixtures.
double regularized_incomplete_beta(double a, double b, double x);
double student_t_two_sided(double t, double df);
double normal_two_sided(double z);

struct CorrelationResult {
    std::string metric;
    std::optional<double> pearson_r;
    std::optional<double> pearson_p;
    std::optional<double> spearman_rho;
    std::optional<double> spearman_p;
    int n = 0;
    std::string error; // non-empty when the metric's inputs were degenerate
};

struct GroupTestResult {
    std::string metric;
    std::optional<double> u_value;
    std::optional<double> p_value;
    int group_size = 0;
    std::vector<std::string> high_group;
    std::vector<std::string> low_group;
    std::string error;
};

// Sort rows descending by `key` (ties broken by repo name ascending); rows
// with a null key are excluded. Returns (high = first k, low = last k).
std::pair<std::vector<RepoMetrics>, std::vector<RepoMetrics>>
split_groups(const std::vector<RepoMetrics>& rows, std::string_view key, int k);

// One result per dependent metric against shared_vocab, in kDependentMetrics
// order. Rows with a null in either column drop out pairwise; a metric whose
// remaining input is degenerate gets an error marker instead of values.
std::vector<CorrelationResult> correlate_all(const std::vector<RepoMetrics>& rows);

// Mann-Whitney U per dependent metric between the top-k and bottom-k rows by
// shared_vocab. k <= 0 selects the default min(5, floor(n/2)).
std::vector<GroupTestResult> compare_groups(const std::vector<RepoMetrics>& rows, int k);

} // namespace vocalign::stats
