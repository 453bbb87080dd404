#pragma once

#include <functional>
#include <vector>

#include "qbss/qcore.hpp"

namespace qbss {

/// One operator instance: order n, deformation q and the Stancu shape
/// parameters (alpha, beta). alpha = beta = 0 recovers the plain
/// q-Baskakov-Szasz operator.
struct OperatorParams {
    int n;
    QParam q;
    double alpha = 0.0;
    double beta = 0.0;

    OperatorParams(int n_, QParam q_, double alpha_ = 0.0, double beta_ = 0.0);

    /// Jackson-integral upper endpoint q/(1-q^n); requires q < 1 strictly.
    double upper_limit() const;
};

/// Convergence audit for one operator evaluation.
struct EvalAudit {
    double value = 0.0;
    int k_terms = 0;     // outer (basis) summands evaluated
    int max_j_terms = 0; // largest Jackson node count across the inner sums
    StopReason stop_reason = StopReason::tolerance;
};

/// Baskakov basis weight p_{n,k}(x): q-binomial(n+k-1, k) q^{k(k-1)/2} x^k
/// over (1+x)_q^{n+k}. Nonnegative for x >= 0.
double baskakov_basis(const OperatorParams& params, int k, double x);

/// Szasz basis weight s_{n,k}(t) = E_q(-[n]_q t) ([n]_q t)^k / [k]_q!.
/// Domain: 0 <= t <= upper_limit(), which keeps (1-q)[n]_q t <= q < 1 and
/// hence every E_q product factor positive.
double szasz_basis(const OperatorParams& params, int k, double t);

/// Evaluates the operator
///
///   [n]_q sum_k p_{n,k}(x) Int_0^{q/(1-q^n)} q^{-k-1} s_{n,k}(t)
///                          f(([n]_q t q^{-k} + alpha)/([n]_q + beta)) d_q t
///
/// for one fixed (params, f), reusing node caches across evaluation points:
/// the q-exponential values E_q(-[n]_q U q^j) are anchored at j = 0 and
/// advanced through the exact identity E_j = E_{j-1}/(1 - q^j) in log space,
/// and f is tabulated over the argument offsets m = j - k it is actually
/// probed at. Results are identical to a fresh evaluation at every x.
///
/// Instances are single-threaded (the caches grow); create one per thread.
class StancuEvaluator {
public:
    StancuEvaluator(const OperatorParams& params,
                    std::function<double(double)> f,
                    const TruncationPolicy& policy);

    /// One operator evaluation at x >= 0. The outer sum truncates on the
    /// magnitude of the full summand [n]_q p_{n,k}(x) I_k per the policy;
    /// the inner Jackson sums use a tail-aware threshold. The factor
    /// q^{-k-1} ([n]_q t)^k is evaluated with exponents combined in log
    /// space, and successive basis weights use the multiplicative recurrence
    /// p_{n,k+1}/p_{n,k} = ([n+k]_q/[k+1]_q) q^k x / (1 + q^{n+k} x).
    EvalAudit evaluate(double x);

    const OperatorParams& params() const { return params_; }

private:
    double ln_e_at(int j);
    double f_at(int m);

    OperatorParams params_;
    std::function<double(double)> f_;
    TruncationPolicy policy_;
    double upper_;
    double nq_;
    double lnq_;
    double ln_nq_upper_;
    std::vector<double> ln_e_;
    std::vector<double> f_pos_;
    std::vector<double> f_neg_;
};

/// Single-shot operator evaluation at x >= 0.
EvalAudit apply(const OperatorParams& params,
                const std::function<double(double)>& f, double x,
                const TruncationPolicy& policy);

/// Operator image of (t - x)^r for r in {1, 2}.
double central_moment(const OperatorParams& params, int r, double x,
                      const TruncationPolicy& policy);

} // namespace qbss
