#pragma once

#include <array>
#include <optional>
#include <string>

namespace vocalign {

// One row of the per-repository metrics table. Null fields mean the metric
// could not be computed for that repository (the diagnostics say why).
struct RepoMetrics {
    std::string repo;
    std::optional<double> shared_vocab;
    std::optional<double> avg_cc;
    std::optional<double> name_entropy;
    std::optional<double> comment_density;
    std::optional<double> readability_score;
    std::optional<double> maintainability_index;
};

// Dependent metrics in report order.
inline constexpr std::array<const char*, 5> kDependentMetrics = {
    "avg_cc", "name_entropy", "readability_score", "comment_density", "maintainability_index",
};

std::optional<double> metric_value(const RepoMetrics& row, std::string_view name);

inline constexpr const char* kMetricsCsvHeader =
    "repo,shared_vocab,avg_cc,name_entropy,comment_density,readability_score,maintainability_index";

} // namespace vocalign
