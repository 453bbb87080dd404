#include "qbss/statconv.hpp"

#include <algorithm>
#include <cmath>
#include <future>

namespace qbss {

namespace {

bool is_perfect_square(long n) {
    if (n < 0)
        return false;
    const long r = std::lround(std::sqrt(static_cast<double>(n)));
    return r * r == n;
}

} // namespace

QSequence make_qsequence(QSequenceKind kind, double a, long seed) {
    if (a < 0.0 || a >= 1.0)
        throw std::invalid_argument("qsequence target a must lie in [0,1)");
    QSequence seq;
    seq.target_a = a;
    seq.seed = seed;
    if (a > 0.0) {
        seq.base = [a](long n) {
            return std::pow(a, 1.0 / static_cast<double>(n));
        };
    } else {
        // 1 - 1/sqrt(n) leaves (0,1) at n = 1; clamp that single index.
        seq.base = [](long n) {
            return n == 1 ? 0.5 : 1.0 - 1.0 / std::sqrt(static_cast<double>(n));
        };
    }
    if (kind == QSequenceKind::plain) {
        seq.kind = "plain";
        seq.exceptions = {[](long) { return false; }, "none"};
        seq.exception_value = [](long) { return 0.5; };
    } else {
        seq.kind = "statistical";
        seq.exceptions = {is_perfect_square, "perfect squares"};
        seq.exception_value = [](long) { return 0.5; };
    }
    return seq;
}

double natural_density(const IndexSet& set, long n_max) {
    if (n_max < 1)
        throw std::invalid_argument("natural_density requires N >= 1");
    long count = 0;
    for (long j = 1; j <= n_max; ++j)
        if (set.contains(j))
            ++count;
    return static_cast<double>(count) / static_cast<double>(n_max);
}

ExperimentReport st_lim_check(const std::function<double(long)>& x, double L,
                              double eps, const std::vector<long>& n_grid) {
    if (!(eps > 0.0))
        throw std::invalid_argument("st_lim_check requires eps > 0");
    if (n_grid.empty())
        throw std::invalid_argument("st_lim_check requires a nonempty N grid");
    if (!std::is_sorted(n_grid.begin(), n_grid.end()) || n_grid.front() < 1)
        throw std::invalid_argument("st_lim_check N grid must be increasing");

    ExperimentReport report({"N", "density"});
    long exceptions = 0;
    long j = 1;
    for (const long n_max : n_grid) {
        for (; j <= n_max; ++j)
            if (std::abs(x(j) - L) >= eps)
                ++exceptions;
        report.add_row({static_cast<double>(n_max),
                        static_cast<double>(exceptions) /
                            static_cast<double>(n_max)});
    }

    bool nonincreasing = true;
    for (std::size_t i = 1; i < report.rows().size(); ++i)
        nonincreasing &=
            report.rows()[i][1] <= report.rows()[i - 1][1] + 0.1;
    const double final_density = report.rows().back()[1];
    report.meta()["final_density"] = final_density;
    report.meta()["densities_nonincreasing"] = nonincreasing;
    report.meta()["consistent_with_st_lim"] =
        nonincreasing && final_density < 0.05;
    report.meta()["L"] = L;
    report.meta()["eps"] = eps;
    return report;
}

namespace {

struct RowErrors {
    double e0 = 0.0, e1 = 0.0, e2 = 0.0, ef = 0.0;
    int max_k = 0, max_j = 0;
};

RowErrors sup_errors(int n, double q_n, double alpha, double beta,
                     const std::vector<double>& grid,
                     const std::function<double(double)>& f,
                     const std::function<double(double)>& weight,
                     const TruncationPolicy& policy) {
    const OperatorParams params(n, QParam(q_n), alpha, beta);
    RowErrors row;
    const std::function<double(double)> tests[4] = {
        [](double) { return 1.0; },
        [](double t) { return t; },
        [](double t) { return t * t; },
        f,
    };
    double* slots[4] = {&row.e0, &row.e1, &row.e2, &row.ef};
    for (int i = 0; i < 4; ++i) {
        StancuEvaluator evaluator(params, tests[i], policy);
        for (const double x : grid) {
            const EvalAudit audit = evaluator.evaluate(x);
            const double err =
                std::abs(audit.value - tests[i](x)) / weight(x);
            *slots[i] = std::max(*slots[i], err);
            row.max_k = std::max(row.max_k, audit.k_terms);
            row.max_j = std::max(row.max_j, audit.max_j_terms);
        }
    }
    return row;
}

ExperimentReport run_rows(const QSequence& qseq, double alpha, double beta,
                          const std::vector<int>& n_grid,
                          const std::vector<double>& grid,
                          const std::function<double(double)>& f,
                          const std::function<double(double)>& weight,
                          const TruncationPolicy& policy) {
    if (n_grid.empty())
        throw std::invalid_argument("experiment requires a nonempty n grid");
    // Rows are independent and pure; fan out, then emit in n order.
    std::vector<std::future<RowErrors>> futures;
    futures.reserve(n_grid.size());
    for (const int n : n_grid) {
        const double q_n = qseq.q(n);
        futures.push_back(std::async(std::launch::async, [=, &f, &policy] {
            return sup_errors(n, q_n, alpha, beta, grid, f, weight, policy);
        }));
    }
    ExperimentReport report({"n", "q_n", "sup_err_e0", "sup_err_e1",
                             "sup_err_e2", "sup_err_f"});
    auto terms = nlohmann::json::array();
    for (std::size_t i = 0; i < n_grid.size(); ++i) {
        const RowErrors row = futures[i].get();
        report.add_row({static_cast<double>(n_grid[i]), qseq.q(n_grid[i]),
                        row.e0, row.e1, row.e2, row.ef});
        terms.push_back({{"n", n_grid[i]},
                         {"max_k_terms", row.max_k},
                         {"max_j_terms", row.max_j}});
    }
    report.meta()["row_terms"] = terms;
    report.meta()["qseq_kind"] = qseq.kind;
    report.meta()["target_a"] = qseq.target_a;
    report.meta()["alpha"] = alpha;
    report.meta()["beta"] = beta;
    report.meta()["policy"] = {{"tol", policy.tol},
                               {"max_terms", policy.max_terms},
                               {"consecutive_small", policy.consecutive_small}};
    return report;
}

} // namespace

ExperimentReport korovkin_experiment(const QSequence& qseq, double alpha,
                                     double beta, double nu,
                                     const std::vector<int>& n_grid,
                                     const std::function<double(double)>& f,
                                     const TruncationPolicy& policy) {
    if (!(nu > 0.0))
        throw std::invalid_argument("korovkin_experiment requires nu > 0");
    std::vector<double> grid;
    const int points = 201;
    grid.reserve(points);
    for (int i = 0; i < points; ++i)
        grid.push_back(nu * static_cast<double>(i) / (points - 1));
    auto report = run_rows(qseq, alpha, beta, n_grid, grid, f,
                           [](double) { return 1.0; }, policy);
    report.meta()["nu"] = nu;
    report.meta()["grid_points"] = points;
    report.meta()["norm"] = "sup";
    return report;
}

ExperimentReport weighted_korovkin_experiment(
    const QSequence& qseq, double alpha, double beta,
    const std::function<double(double)>& f, const WeightedNorm& norm,
    const std::vector<int>& n_grid, const TruncationPolicy& policy) {
    if (!(norm.domain_cap > 0.0))
        throw std::invalid_argument("weighted norm domain cap must be > 0");
    // Linear coverage near 0 where the weight is flat, geometric beyond.
    std::vector<double> grid;
    const double linear_end = std::min(2.0, norm.domain_cap);
    for (double x = 0.0; x < linear_end + 1e-12; x += 0.1)
        grid.push_back(x);
    for (double x = linear_end * 1.25; x < norm.domain_cap; x *= 1.25)
        grid.push_back(x);
    grid.push_back(norm.domain_cap);
    auto report = run_rows(qseq, alpha, beta, n_grid, grid, f, norm.rho,
                           policy);
    report.meta()["x_max"] = norm.domain_cap;
    report.meta()["grid_points"] = grid.size();
    report.meta()["norm"] = "weighted";
    // For f in C_B the sup over [X_max, inf) of |Df - f|/rho is bounded by
    // 2 sup|f| / rho(X_max); record the factor so reports carry the bound.
    report.meta()["tail_bound_over_sup_f"] =
        2.0 / norm.rho(norm.domain_cap);
    return report;
}

} // namespace qbss
