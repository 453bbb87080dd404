#include "qbss/qcore.hpp"

#include <cmath>
#include <limits>

namespace qbss {

namespace {

constexpr double kNearOneWidth = 1e-12;

// Kahan-compensated accumulator.
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double term) {
        const double y = term - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

} // namespace

QParam::QParam(double q) : q_(q), near_one_(std::abs(1.0 - q) < kNearOneWidth) {
    if (!(q > 0.0) || q > 1.0)
        throw std::invalid_argument("q must lie in (0,1]");
}

void QParam::require_sub_one(const char* what) const {
    if (near_one_)
        throw std::domain_error(std::string(what) + " requires q < 1 strictly");
}

void TruncationPolicy::validate() const {
    if (!(tol > 0.0))
        throw std::invalid_argument("truncation tol must be positive");
    if (max_terms < 1)
        throw std::invalid_argument("max_terms must be >= 1");
    if (consecutive_small < 1)
        throw std::invalid_argument("consecutive_small must be >= 1");
}

double q_integer(int n, const QParam& q) {
    if (n < 0)
        throw std::invalid_argument("q_integer requires n >= 0");
    if (q.near_one())
        return static_cast<double>(n);
    // expm1/log keep full precision as q -> 1, where 1-q^n loses digits.
    return -std::expm1(static_cast<double>(n) * std::log(q.value())) /
           (1.0 - q.value());
}

double q_factorial(int n, const QParam& q) {
    if (n < 0)
        throw std::invalid_argument("q_factorial requires n >= 0");
    double prod = 1.0;
    for (int j = 1; j <= n; ++j)
        prod *= q_integer(j, q);
    return prod;
}

double q_binomial(int n, int k, const QParam& q) {
    if (n < 0 || k < 0 || k > n)
        throw std::invalid_argument("q_binomial requires 0 <= k <= n");
    if (k > n - k)
        k = n - k;
    // [n,k]_q = prod_{j=0}^{k-1} [n-j]_q / [j+1]_q, pairing numerator and
    // denominator factors so intermediates never approach overflow.
    double prod = 1.0;
    for (int j = 0; j < k; ++j)
        prod *= q_integer(n - j, q) / q_integer(j + 1, q);
    return prod;
}

double q_pochhammer(double x, int n, const QParam& q) {
    if (n < 0)
        throw std::invalid_argument("q_pochhammer requires n >= 0");
    double prod = 1.0;
    double qpow = 1.0;
    for (int j = 0; j < n; ++j) {
        prod *= 1.0 + qpow * x;
        qpow *= q.value();
    }
    return prod;
}

namespace {

// Infinite product prod_{j>=0} (1 + c q^j) for c >= 0: truncated once the
// factor deviation c q^j stays below tol for `consecutive_small` factors.
Truncated infinite_pochhammer(double c, const QParam& q,
                              const TruncationPolicy& policy,
                              const char* what) {
    double prod = 1.0;
    double u = c;
    int small_run = 0;
    for (int j = 0; j < policy.max_terms; ++j) {
        prod *= 1.0 + u;
        if (u < policy.tol) {
            if (++small_run >= policy.consecutive_small)
                return {prod, j + 1, StopReason::tolerance};
        } else {
            small_run = 0;
        }
        u *= q.value();
    }
    throw TruncationError(std::string(what) + ": term cap exhausted",
                          policy.max_terms);
}

} // namespace

Truncated q_pochhammer_real(double x, double alpha, const QParam& q,
                            const TruncationPolicy& policy) {
    policy.validate();
    if (x < 0.0)
        throw std::invalid_argument("q_pochhammer_real requires x >= 0");
    q.require_sub_one("q_pochhammer_real");
    const Truncated num = infinite_pochhammer(x, q, policy, "q_pochhammer_real");
    const Truncated den = infinite_pochhammer(std::pow(q.value(), alpha) * x, q,
                                              policy, "q_pochhammer_real");
    return {num.value / den.value, num.terms_used + den.terms_used,
            StopReason::tolerance};
}

Truncated big_e_q(double z, const QParam& q, const TruncationPolicy& policy) {
    policy.validate();
    q.require_sub_one("big_e_q");
    const double qv = q.value();
    const double u0 = (1.0 - qv) * z;
    if (1.0 + u0 <= 0.0)
        throw std::domain_error("big_e_q: non-positive product factor "
                                "((1-q)|z| >= 1 with z < 0)");

    // Stopping on a factor deviation u_j leaves an un-multiplied geometric
    // tail of about u_j q/(1-q); scale the threshold so that tail, not the
    // single factor, is what stays below tol.
    const double factor_tol = policy.tol * std::min(1.0, (1.0 - qv) / qv);

    // Primary evaluation: the product form.
    double prod = 1.0;
    double u = u0;
    int terms = 0;
    int small_run = 0;
    bool done = false;
    for (int j = 0; j < policy.max_terms; ++j) {
        prod *= 1.0 + u;
        ++terms;
        if (std::abs(u) < factor_tol) {
            if (++small_run >= policy.consecutive_small) {
                done = true;
                break;
            }
        } else {
            small_run = 0;
        }
        u *= qv;
    }
    if (!done)
        throw TruncationError("big_e_q: product term cap exhausted",
                              policy.max_terms);

    // Cross-check against the series form. The alternating series is
    // ill-conditioned for large |z| (its largest term grows like
    // |z|^k/[k]_q!), so the check is run at the reduced argument z' = q^m z
    // with |z'| <= 2, using the identity E_q(z) = (1 + (1-q)z) E_q(qz);
    // the leading m factors are shared by both forms and drop out of the
    // comparison.
    int m = 0;
    double um = u0;
    while (std::abs(um) > 2.0 * (1.0 - qv)) {
        um *= qv;
        if (++m >= policy.max_terms)
            throw TruncationError("big_e_q: argument reduction cap exhausted",
                                  m);
    }
    double tail_prod = 1.0;
    {
        double v = um;
        int srun = 0;
        for (int j = 0; j < policy.max_terms; ++j) {
            tail_prod *= 1.0 + v;
            if (std::abs(v) < factor_tol && ++srun >= policy.consecutive_small)
                break;
            if (std::abs(v) >= factor_tol)
                srun = 0;
            v *= qv;
        }
    }
    const double zr = um / (1.0 - qv); // reduced argument q^m z
    KahanSum series;
    {
        double term = 1.0; // k = 0
        double qpow_k = 1.0; // q^k, builds q^{k(k-1)/2} incrementally
        int srun = 0;
        for (int k = 0;; ++k) {
            series.add(term);
            if (std::abs(term) < policy.tol) {
                if (++srun >= policy.consecutive_small)
                    break;
            } else {
                srun = 0;
            }
            if (k + 1 >= policy.max_terms)
                throw TruncationError("big_e_q: series term cap exhausted",
                                      policy.max_terms);
            term *= qpow_k * zr / q_integer(k + 1, q);
            qpow_k *= qv;
        }
    }
    const double scale = std::max({1.0, std::abs(tail_prod), std::abs(series.sum)});
    if (std::abs(tail_prod - series.sum) > 10.0 * policy.tol * scale)
        throw TruncationError("big_e_q: product/series cross-check failed",
                              terms);

    return {prod, terms, StopReason::tolerance};
}

Truncated jackson_integral(const std::function<double(double)>& f, double a,
                           const QParam& q, const TruncationPolicy& policy) {
    policy.validate();
    if (!(a > 0.0))
        throw std::invalid_argument("jackson_integral requires a > 0");
    q.require_sub_one("jackson_integral");
    const double qv = q.value();
    const double prefac = (1.0 - qv) * a;
    KahanSum sum;
    double qpow = 1.0;
    int small_run = 0;
    for (int n = 0; n < policy.max_terms; ++n) {
        const double term = prefac * f(a * qpow) * qpow;
        if (!std::isfinite(term))
            throw TruncationError("jackson_integral: non-finite summand", n);
        sum.add(term);
        if (std::abs(term) < policy.tol) {
            if (++small_run >= policy.consecutive_small)
                return {sum.sum, n + 1, StopReason::tolerance};
        } else {
            small_run = 0;
        }
        qpow *= qv;
    }
    throw TruncationError("jackson_integral: term cap exhausted",
                          policy.max_terms);
}

Truncated jackson_integral_improper(const std::function<double(double)>& f,
                                    double a_scale, const QParam& q,
                                    const TruncationPolicy& policy) {
    policy.validate();
    if (!(a_scale > 0.0))
        throw std::invalid_argument("jackson_integral_improper requires A > 0");
    q.require_sub_one("jackson_integral_improper");
    const double qv = q.value();
    const double prefac = 1.0 - qv;
    KahanSum sum;
    double qpow = 1.0;
    int small_run = 0;
    int growth_run = 0;
    double prev_abs = std::numeric_limits<double>::infinity();
    for (int n = 0; n < policy.max_terms; ++n) {
        const double node = qpow / a_scale;
        const double term = prefac * f(node) * node;
        if (!std::isfinite(term))
            throw TruncationError("jackson_integral_improper: divergent "
                                  "(non-finite summand)", n);
        sum.add(term);
        const double abs_term = std::abs(term);
        if (abs_term < policy.tol) {
            if (++small_run >= policy.consecutive_small)
                return {sum.sum, n + 1, StopReason::tolerance};
        } else {
            small_run = 0;
        }
        // Non-decreasing terms above tol signal an integrand growing at
        // least like 1/t toward 0; bail out before burning the whole cap.
        if (abs_term >= prev_abs && abs_term >= policy.tol) {
            if (++growth_run >= 100)
                throw TruncationError("jackson_integral_improper: divergent "
                                      "(terms not decreasing)", n);
        } else {
            growth_run = 0;
        }
        prev_abs = abs_term;
        qpow *= qv;
    }
    throw TruncationError("jackson_integral_improper: term cap exhausted",
                          policy.max_terms);
}

} // namespace qbss
