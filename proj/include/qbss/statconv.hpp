#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qbss/operators.hpp"
#include "qbss/report.hpp"

namespace qbss {

/// Pure, total membership predicate over positive integers.
struct IndexSet {
    std::function<bool(long)> contains;
    std::string description;
};

/// A sequence (q_n) in (0,1) built from a plain generator plus an optional
/// perturbation on a density-zero index set. target_a is the intended
/// statistical limit of q_n^n.
struct QSequence {
    std::function<double(long)> base;
    IndexSet exceptions;
    std::function<double(long)> exception_value;
    double target_a = 0.0;
    std::string kind;
    long seed = 0;

    double q(long n) const {
        return exceptions.contains && exceptions.contains(n)
                   ? exception_value(n)
                   : base(n);
    }
};

enum class QSequenceKind { plain, statistical };

/// plain: q_n = a^{1/n} for a > 0 (so q_n^n = a exactly) or q_n = 1 - 1/sqrt(n)
/// for a = 0 (clamped to 1/2 at n = 1 where the formula leaves (0,1)).
/// statistical: the plain sequence with q_n = 1/2 forced on perfect squares,
/// a density-zero set, so q_n -> 1 statistically but not in the ordinary sense.
QSequence make_qsequence(QSequenceKind kind, double a, long seed);

/// Weight function rho (rho(x) >= 1) and the numeric sup-domain cap.
struct WeightedNorm {
    std::function<double(double)> rho = [](double x) { return 1.0 + x * x; };
    double domain_cap = 50.0;
};

/// |{j <= N : j in set}| / N.
double natural_density(const IndexSet& set, long n_max);

/// Densities of the exception set {j : |x_j - L| >= eps} at each N in
/// N_grid. Columns: N,density. The verdict `consistent_with_st_lim` (report
/// meta) holds iff the densities are nonincreasing within slack 0.1 and the
/// final density is below 0.05.
ExperimentReport st_lim_check(const std::function<double(long)>& x, double L,
                              double eps, const std::vector<long>& n_grid);

/// Sup-norm Korovkin experiment on C[0, nu]: for each n in n_grid, the
/// sup-grid errors of e0, e1, e2 and f over 201 equispaced points.
/// Columns: n,q_n,sup_err_e0,sup_err_e1,sup_err_e2,sup_err_f.
ExperimentReport korovkin_experiment(const QSequence& qseq, double alpha,
                                     double beta, double nu,
                                     const std::vector<int>& n_grid,
                                     const std::function<double(double)>& f,
                                     const TruncationPolicy& policy);

/// Weighted variant: errors measured as sup |D(f;x) - f(x)| / rho(x) over a
/// linear+geometric hybrid grid on [0, domain_cap]. Same columns.
ExperimentReport weighted_korovkin_experiment(
    const QSequence& qseq, double alpha, double beta,
    const std::function<double(double)>& f, const WeightedNorm& norm,
    const std::vector<int>& n_grid, const TruncationPolicy& policy);

} // namespace qbss
