#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace qbss {

/// Validated deformation parameter q with 0 < q <= 1.
///
/// Formulas with a 1/(1-q) singularity must branch on near_one(), which is
/// true iff |1-q| < 1e-12; in that regime the exact integer limits
/// ([n]_1 = n) are used instead of the quotient form.
class QParam {
public:
    explicit QParam(double q);

    double value() const { return q_; }
    bool near_one() const { return near_one_; }

    /// Throws std::domain_error when q is (near) 1 and `what` needs q < 1.
    void require_sub_one(const char* what) const;

private:
    double q_;
    bool near_one_;
};

/// Caps and tolerances for every truncated sum, product and q-integral.
struct TruncationPolicy {
    double tol = 1e-14;        // absolute tail tolerance per term
    int max_terms = 100000;    // hard cap on terms/factors
    int consecutive_small = 3; // stop after this many successive small terms

    void validate() const; // throws std::invalid_argument on bad fields
};

enum class StopReason { tolerance, cap };

/// Value of a truncated evaluation together with its convergence audit.
struct Truncated {
    double value = 0.0;
    int terms_used = 0;
    StopReason stop_reason = StopReason::tolerance;
};

/// Raised when a truncated evaluation exhausts its term cap (or detects
/// divergence) before meeting the tolerance.
struct TruncationError : std::runtime_error {
    TruncationError(const std::string& what, int terms)
        : std::runtime_error(what), terms_used(terms) {}
    int terms_used;
};

/// [n]_q = (1 - q^n)/(1 - q), with [n]_1 = n. Requires n >= 0.
double q_integer(int n, const QParam& q);

/// [n]_q! = [n]_q [n-1]_q ... [1]_q, with [0]_q! = 1.
double q_factorial(int n, const QParam& q);

/// Gaussian binomial coefficient, computed as a cancellation-safe product
/// of q-integer ratios rather than a factorial quotient. Requires 0 <= k <= n.
double q_binomial(int n, int k, const QParam& q);

/// (1+x)_q^n = (1+x)(1+qx)...(1+q^{n-1}x), with the empty product = 1.
double q_pochhammer(double x, int n, const QParam& q);

/// (1+x)_q^alpha = (1+x)_q^inf / (1+q^alpha x)_q^inf for real alpha, x >= 0.
/// Requires q < 1 strictly; each infinite product is truncated once its
/// factors deviate from 1 by less than policy.tol.
Truncated q_pochhammer_real(double x, double alpha, const QParam& q,
                            const TruncationPolicy& policy);

/// q-exponential E_q(z) = prod_j (1 + (1-q) q^j z) = sum_k q^{k(k-1)/2} z^k/[k]_q!.
///
/// The product form is primary (its factors stay positive on the validated
/// domain); the series form is evaluated as an internal cross-check and the
/// two must agree within 10*policy.tol. For negative z the first factor
/// 1+(1-q)z must stay positive, i.e. (1-q)|z| < 1.
Truncated big_e_q(double z, const QParam& q, const TruncationPolicy& policy);

/// Jackson integral over [0, a]: (1-q) a sum_n f(a q^n) q^n. Requires a > 0,
/// q < 1. Stops once policy.consecutive_small successive summands fall below
/// policy.tol in magnitude; the cap is an error.
Truncated jackson_integral(const std::function<double(double)>& f, double a,
                           const QParam& q, const TruncationPolicy& policy);

/// Improper q-integral over [0, inf/A): (1-q) sum_{n>=0} f(q^n/A) q^n/A.
/// Errors on cap exhaustion or when terms fail to decrease below tol.
Truncated jackson_integral_improper(const std::function<double(double)>& f,
                                    double a_scale, const QParam& q,
                                    const TruncationPolicy& policy);

} // namespace qbss
