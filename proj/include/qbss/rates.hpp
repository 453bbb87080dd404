#pragma once

#include <functional>
#include <vector>

#include "qbss/operators.hpp"
#include "qbss/report.hpp"

namespace qbss {

/// Grid estimate of the modulus of continuity omega(f; delta). Being a
/// finite-grid supremum it is a LOWER bound of the true modulus; checks
/// that place it on the larger side of an inequality must add slack.
struct ModulusEstimate {
    double delta = 0.0;
    double omega = 0.0;
    double grid_step = 0.0;
};

/// omega(f; delta) = sup |f(t)-f(x)| over grid pairs with |t-x| <= delta,
/// on `grid_points` equispaced points of [lo, hi].
ModulusEstimate modulus(const std::function<double(double)>& f, double delta,
                        double lo, double hi, int grid_points);

/// Grid estimate of the Lipschitz-type maximal function
/// sup_{t != x} |f(t)-f(x)| / |t-x|^alpha_exp; pairs closer than 1e-9 are
/// skipped. A lower bound of the true supremum.
double lipschitz_maximal(const std::function<double(double)>& f,
                         double alpha_exp, double x,
                         const std::vector<double>& t_grid);

/// Estimated constant for the Lipschitz-type space on E = [e_lo, e_hi].
struct LipschitzEstimate {
    double alpha_exp = 1.0;
    double m = 0.0;
    double e_lo = 0.0;
    double e_hi = 0.0;
};

/// d(x, E) for the interval E = [e_lo, e_hi] (e_hi may be +inf).
double dist_to_set(double x, double e_lo, double e_hi);

/// Pointwise modulus bound |D(f;q;x) - f(x)| <= 2 omega(f; sqrt(delta_n(x)))
/// checked over x_grid for nondecreasing bounded f. Columns:
/// x,lhs,delta_n,omega,rhs,holds; rhs carries a documented grid-resolution
/// slack since omega is a grid lower bound.
ExperimentReport pointwise_bound_check(const OperatorParams& params,
                                       const std::function<double(double)>& f,
                                       const std::vector<double>& x_grid,
                                       const TruncationPolicy& policy);

struct CsCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

/// Cauchy-Schwarz inequality for q-integrals over [a, b] with a in [0, bq]:
///   Int_a^b |t-x| d_q t <= (Int_a^b |t-x|^2 d_q t)^{1/2} (Int_a^b d_q t)^{1/2}
/// with Int_a^b computed as Int_0^b - Int_0^a. holds = lhs <= rhs + 1e-12.
CsCheck cauchy_schwarz_q_check(double a, double b, const QParam& q, double x,
                               const TruncationPolicy& policy);

/// Maximal-function bound |D(f;q;x) - f(x)| <= M (delta_n^{alpha/2} + d(x,E))
/// with M estimated by lipschitz_maximal over a calibration grid and
/// inflated by 1.25. Columns: x,lhs,delta_n,dist,rhs,holds.
ExperimentReport maximal_bound_check(const OperatorParams& params,
                                     const std::function<double(double)>& f,
                                     double alpha_exp, double e_lo, double e_hi,
                                     const std::vector<double>& x_grid,
                                     const TruncationPolicy& policy);

} // namespace qbss
