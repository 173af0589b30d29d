#include "vocalign/repo_metrics.hpp"

namespace vocalign {

std::optional<double> metric_value(const RepoMetrics& row, std::string_view name) {
    if (name == "shared_vocab")
        return row.shared_vocab;
    if (name == "avg_cc")
        return row.avg_cc;
    if (name == "name_entropy")
        return row.name_entropy;
    if (name == "comment_density")
        return row.comment_density;
    if (name == "readability_score")
        return row.readability_score;
    if (name == "maintainability_index")
        return row.maintainability_index;
    return std::nullopt;
}

} // namespace vocalign
