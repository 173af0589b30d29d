#include "vocalign/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "vocalign/common.hpp"

namespace vocalign::stats {

namespace {

// Lentz's continued fraction for the incomplete beta function.
double beta_continued_fraction(double a, double b, double x) {
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-15;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny)
        d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 500; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny)
            d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny)
            c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny)
            d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny)
            c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps)
            break;
    }
    return h;
}

double mean(std::span<const double> v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

bool has_ties(std::span<const double> a, std::span<const double> b) {
    std::vector<double> pooled(a.begin(), a.end());
    pooled.insert(pooled.end(), b.begin(), b.end());
    std::sort(pooled.begin(), pooled.end());
    return std::adjacent_find(pooled.begin(), pooled.end()) != pooled.end();
}

} // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (x <= 0.0)
        return 0.0;
    if (x >= 1.0)
        return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0))
        return front * beta_continued_fraction(a, b, x) / a;
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_sided(double t, double df) {
    if (!std::isfinite(t))
        return 0.0;
    // P(|T| >= |t|) = I_{df/(df+t^2)}(df/2, 1/2)
    return regularized_incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
}

double normal_two_sided(double z) {
    return std::erfc(std::fabs(z) / std::sqrt(2.0));
}

Correlation pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw DegenerateInput("pearson: input lengths differ");
    const std::size_t n = x.size();
    if (n < 3)
        throw DegenerateInput("pearson: need at least 3 observations");
    const double mx = mean(x);
    const double my = mean(y);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        throw DegenerateInput("pearson: zero variance input");
    double r = sxy / std::sqrt(sxx * syy);
    r = std::clamp(r, -1.0, 1.0);

    const double df = static_cast<double>(n - 2);
    const double one_minus_r2 = 1.0 - r * r;
    double p = 0.0;
    if (one_minus_r2 > 0.0)
        p = student_t_two_sided(r * std::sqrt(df / one_minus_r2), df);
    return {r, p};
}

std::vector<double> midranks(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]])
            ++j;
        const double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k)
            ranks[order[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

Correlation spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw DegenerateInput("spearman: input lengths differ");
    if (x.size() < 3)
        throw DegenerateInput("spearman: need at least 3 observations");
    const std::vector<double> rx = midranks(x);
    const std::vector<double> ry = midranks(y);
    return pearson(rx, ry);
}

std::vector<std::uint64_t> u_distribution(int n1, int n2) {
    // c(i, j, u) = c(i-1, j, u-j) + c(i, j-1, u)
    std::vector<std::vector<std::uint64_t>> prev(n2 + 1), cur(n2 + 1);
    for (int j = 0; j <= n2; ++j)
        prev[j] = {1};
    for (int i = 1; i <= n1; ++i) {
        cur[0] = {1};
        for (int j = 1; j <= n2; ++j) {
            cur[j].assign(static_cast<std::size_t>(i) * j + 1, 0);
            for (std::size_t u = 0; u < cur[j].size(); ++u) {
                std::uint64_t total = 0;
                if (u >= static_cast<std::size_t>(j) && u - j < prev[j].size())
                    total += prev[j][u - j];
                if (u < cur[j - 1].size())
                    total += cur[j - 1][u];
                cur[j][u] = total;
            }
        }
        std::swap(prev, cur);
    }
    return prev[n2];
}

double exact_u_two_sided(double u, int n1, int n2) {
    const std::vector<std::uint64_t> counts = u_distribution(n1, n2);
    const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
    double le = 0.0, ge = 0.0;
    for (std::size_t v = 0; v < counts.size(); ++v) {
        if (static_cast<double>(v) <= u)
            le += static_cast<double>(counts[v]);
        if (static_cast<double>(v) >= u)
            ge += static_cast<double>(counts[v]);
    }
    return std::min(1.0, 2.0 * std::min(le, ge) / total);
}

MannWhitney mann_whitney(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty())
        throw EmptyGroup("mann_whitney: both groups must be non-empty");
    const std::size_t n1 = a.size();
    const std::size_t n2 = b.size();
    double u = 0.0;
    for (double x : a)
        for (double y : b) {
            if (x > y)
                u += 1.0;
            else if (x == y)
                u += 0.5;
        }

    MannWhitney result;
    result.u = u;
    const bool tied = has_ties(a, b);
    if (n1 + n2 <= 25 && !tied) {
        result.exact = true;
        result.p = exact_u_two_sided(u, static_cast<int>(n1), static_cast<int>(n2));
        return result;
    }

    // normal approximation with tie correction and continuity correction
    const double n = static_cast<double>(n1 + n2);
    const double mu = static_cast<double>(n1) * static_cast<double>(n2) / 2.0;
    double tie_term = 0.0;
    {
        std::map<double, std::size_t> freq;
        for (double x : a)
            ++freq[x];
        for (double y : b)
            ++freq[y];
        for (const auto& [value, t] : freq) {
            (void)value;
            const double td = static_cast<double>(t);
            tie_term += td * td * td - td;
        }
    }
    const double var = static_cast<double>(n1) * static_cast<double>(n2) / 12.0 *
                       ((n + 1.0) - tie_term / (n * (n - 1.0)));
    if (var <= 0.0) {
        result.p = 1.0;
        return result;
    }
    double num = u - mu;
    if (num > 0.0)
        num -= 0.5;
    else if (num < 0.0)
        num += 0.5;
    result.p = std::min(1.0, normal_two_sided(num / std::sqrt(var)));
    return result;
}

std::pair<std::vector<RepoMetrics>, std::vector<RepoMetrics>>
split_groups(const std::vector<RepoMetrics>& rows, std::string_view key, int k) {
    std::vector<RepoMetrics> usable;
    for (const RepoMetrics& row : rows)
        if (metric_value(row, key))
            usable.push_back(row);
    if (k < 1 || usable.size() < 2 * static_cast<std::size_t>(k))
        throw InsufficientRows("split_groups: need at least " + std::to_string(2 * k) +
                               " rows with non-null '" + std::string(key) + "', have " +
                               std::to_string(usable.size()));
    std::sort(usable.begin(), usable.end(), [&](const RepoMetrics& a, const RepoMetrics& b) {
        const double va = *metric_value(a, key);
        const double vb = *metric_value(b, key);
        if (va != vb)
            return va > vb;
        return a.repo < b.repo;
    });
    std::vector<RepoMetrics> high(usable.begin(), usable.begin() + k);
    std::vector<RepoMetrics> low(usable.end() - k, usable.end());
    return {std::move(high), std::move(low)};
}

std::vector<CorrelationResult> correlate_all(const std::vector<RepoMetrics>& rows) {
    if (rows.size() < 3)
        throw DegenerateInput("correlate_all: need at least 3 rows");
    std::vector<CorrelationResult> results;
    for (const char* metric : kDependentMetrics) {
        CorrelationResult res;
        res.metric = metric;
        std::vector<double> x, y;
        for (const RepoMetrics& row : rows) {
            const auto sv = row.shared_vocab;
            const auto mv = metric_value(row, metric);
            if (sv && mv) {
                x.push_back(*sv);
                y.push_back(*mv);
            }
        }
        res.n = static_cast<int>(x.size());
        try {
            const Correlation pe = pearson(x, y);
            const Correlation sp = spearman(x, y);
            res.pearson_r = pe.r;
            res.pearson_p = pe.p;
            res.spearman_rho = sp.r;
            res.spearman_p = sp.p;
        } catch (const DegenerateInput& e) {
            res.error = e.what();
        }
        results.push_back(std::move(res));
    }
    return results;
}

std::vector<GroupTestResult> compare_groups(const std::vector<RepoMetrics>& rows, int k) {
    if (k <= 0) {
        std::size_t usable = 0;
        for (const RepoMetrics& row : rows)
            if (row.shared_vocab)
                ++usable;
        k = static_cast<int>(std::min<std::size_t>(5, usable / 2));
        if (k < 1)
            throw InsufficientRows("compare_groups: not enough rows to form groups");
    }
    const auto [high, low] = split_groups(rows, "shared_vocab", k);
    std::vector<GroupTestResult> results;
    for (const char* metric : kDependentMetrics) {
        GroupTestResult res;
        res.metric = metric;
        res.group_size = k;
        for (const RepoMetrics& row : high)
            res.high_group.push_back(row.repo);
        for (const RepoMetrics& row : low)
            res.low_group.push_back(row.repo);
        std::vector<double> a, b;
        for (const RepoMetrics& row : high)
            if (auto v = metric_value(row, metric))
                a.push_back(*v);
        for (const RepoMetrics& row : low)
            if (auto v = metric_value(row, metric))
                b.push_back(*v);
        try {
            const MannWhitney mw = mann_whitney(a, b);
            res.u_value = mw.u;
            res.p_value = mw.p;
        } catch (const EmptyGroup& e) {
            res.error = e.what();
        }
        results.push_back(std::move(res));
    }
    return results;
}

} // namespace vocalign::stats
