#include "qbss/moments.hpp"

#include <cmath>

namespace qbss {

// The closed forms below are evaluated exactly as displayed, with no
// algebraic rearrangement, so any disagreement with the numeric double-sum
// oracle points at the transcription rather than hidden simplifications.

MomentSet moments_basic(int n, const QParam& q, double x) {
    if (n < 1)
        throw std::invalid_argument("moments_basic requires n >= 1");
    if (x < 0.0)
        throw std::domain_error("moments_basic requires x >= 0");
    const double qv = q.value();
    const double b = q_integer(n, q);
    MomentSet m;
    m.m1 = x + qv / b;
    m.m2 = (1.0 + 1.0 / (qv * b)) * x * x +
           x * (1.0 + qv * (qv + 2.0)) / b +
           qv * qv * (1.0 + qv) / (b * b);
    m.delta = m.m2 - 2.0 * x * m.m1 + x * x;
    return m;
}

MomentSet moments_stancu(const OperatorParams& params, double x) {
    if (x < 0.0)
        throw std::domain_error("moments_stancu requires x >= 0");
    const double qv = params.q.value();
    const double b = q_integer(params.n, params.q);
    const double a = params.alpha;
    const double d = b + params.beta;
    MomentSet m;
    m.m1 = (b * x + qv + a) / d;
    m.m2 = (b * (qv * b + 1.0) / (qv * d * d)) * x * x +
           ((1.0 + qv * (qv + 2.0)) * b + 2.0 * a * b) * x / (d * d) +
           (qv * qv * (1.0 + qv) + 2.0 * qv * a + a * a) / (d * d);
    m.delta = m.m2 - 2.0 * x * m.m1 + x * x;
    return m;
}

double delta_n(const OperatorParams& params, double x) {
    if (x < 0.0)
        throw std::domain_error("delta_n requires x >= 0");
    const double qv = params.q.value();
    const double b = q_integer(params.n, params.q);
    const double a = params.alpha;
    const double beta = params.beta;
    const double d = b + beta;
    return (b * (qv * b + 1.0) / (qv * d * d) + 1.0 - 2.0 * b / d) * x * x +
           ((b + qv * qv * b - 2.0 * a * beta - 2.0 * qv * beta) / (d * d)) * x +
           (qv * qv * (1.0 + qv) + 2.0 * qv * a + a * a) / (d * d);
}

ExperimentReport verify_moments(const OperatorParams& params,
                                const std::vector<double>& x_grid,
                                const TruncationPolicy& policy) {
    params.q.require_sub_one("verify_moments");
    ExperimentReport report({"x", "closed_m1", "numeric_m1", "closed_m2",
                             "numeric_m2", "err1", "err2"});
    auto flagged = nlohmann::json::array();
    double max_err = 0.0;
    int max_k_terms = 0;
    int max_j_terms = 0;
    StancuEvaluator eval1(params, [](double t) { return t; }, policy);
    StancuEvaluator eval2(params, [](double t) { return t * t; }, policy);
    for (std::size_t i = 0; i < x_grid.size(); ++i) {
        const double x = x_grid[i];
        const MomentSet closed = moments_stancu(params, x);
        const EvalAudit a1 = eval1.evaluate(x);
        const EvalAudit a2 = eval2.evaluate(x);
        const double err1 = std::abs(a1.value - closed.m1);
        const double err2 = std::abs(a2.value - closed.m2);
        report.add_row({x, closed.m1, a1.value, closed.m2, a2.value, err1,
                        err2});
        if (err1 > 1e-8 || err2 > 1e-8)
            flagged.push_back(i);
        max_err = std::max({max_err, err1, err2});
        max_k_terms = std::max({max_k_terms, a1.k_terms, a2.k_terms});
        max_j_terms = std::max({max_j_terms, a1.max_j_terms, a2.max_j_terms});
    }
    report.meta()["flagged_rows"] = flagged;
    report.meta()["all_within_tol"] = flagged.empty();
    report.meta()["max_abs_err"] = max_err;
    report.meta()["max_k_terms"] = max_k_terms;
    report.meta()["max_j_terms"] = max_j_terms;
    return report;
}

} // namespace qbss
