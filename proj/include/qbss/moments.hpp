#pragma once

#include <vector>

#include "qbss/operators.hpp"
#include "qbss/report.hpp"

namespace qbss {

/// Closed-form operator moments at one point: images of 1, t, t^2 and the
/// second central moment delta = m2 - 2x m1 + x^2.
struct MomentSet {
    double m0 = 1.0; // constructed, not computed
    double m1 = 0.0;
    double m2 = 0.0;
    double delta = 0.0;
};

/// Moments of the plain (alpha = beta = 0) operator:
///   m1 = x + q/[n]_q
///   m2 = (1 + 1/(q[n]_q)) x^2 + x (1 + q(q+2))/[n]_q + q^2(1+q)/[n]_q^2
/// Valid for q in (0,1]; at q = 1 these reduce to the classical
/// Baskakov-Szasz moments x + 1/n and (1 + 1/n) x^2 + 4x/n + 2/n^2.
MomentSet moments_basic(int n, const QParam& q, double x);

/// Moments of the Stancu generalization:
///   m1 = ([n]_q x + q + alpha)/([n]_q + beta)
///   m2 = ([n]_q(q[n]_q+1)/(q([n]_q+beta)^2)) x^2
///        + ((1+q(q+2))[n]_q + 2 alpha [n]_q) x /([n]_q+beta)^2
///        + (q^2(1+q) + 2 q alpha + alpha^2)/([n]_q+beta)^2
/// Reduces to moments_basic at alpha = beta = 0.
MomentSet moments_stancu(const OperatorParams& params, double x);

/// Second central moment as the displayed quadratic in x; agrees with
/// m2 - 2x m1 + x^2 from moments_stancu to working precision.
double delta_n(const OperatorParams& params, double x);

/// Closed-form vs. truncated-double-sum comparison over an x grid.
/// Columns: x,closed_m1,numeric_m1,closed_m2,numeric_m2,err1,err2.
/// Rows with an error above 1e-8 are flagged in the report meta.
ExperimentReport verify_moments(const OperatorParams& params,
                                const std::vector<double>& x_grid,
                                const TruncationPolicy& policy);

} // namespace qbss
