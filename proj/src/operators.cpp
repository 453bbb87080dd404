#include "qbss/operators.hpp"

#include <cmath>
#include <limits>

namespace qbss {

OperatorParams::OperatorParams(int n_, QParam q_, double alpha_, double beta_)
    : n(n_), q(q_), alpha(alpha_), beta(beta_) {
    if (n < 1)
        throw std::invalid_argument("operator order n must be >= 1");
    if (alpha < 0.0 || beta < 0.0)
        throw std::invalid_argument("Stancu parameters must be nonnegative");
}

double OperatorParams::upper_limit() const {
    q.require_sub_one("operator evaluation");
    const double qv = q.value();
    return qv / (1.0 - std::pow(qv, n));
}

double baskakov_basis(const OperatorParams& params, int k, double x) {
    if (k < 0)
        throw std::invalid_argument("baskakov_basis requires k >= 0");
    if (x < 0.0)
        throw std::domain_error("baskakov_basis requires x >= 0");
    const QParam& q = params.q;
    if (x == 0.0)
        return k == 0 ? 1.0 : 0.0;
    const double ln_binom = std::log(q_binomial(params.n + k - 1, k, q));
    const double ln_core = 0.5 * static_cast<double>(k) * (k - 1) *
                               std::log(q.value()) +
                           static_cast<double>(k) * std::log(x);
    const double ln_poch = std::log(q_pochhammer(x, params.n + k, q));
    return std::exp(ln_binom + ln_core - ln_poch);
}

double szasz_basis(const OperatorParams& params, int k, double t) {
    if (k < 0)
        throw std::invalid_argument("szasz_basis requires k >= 0");
    const double upper = params.upper_limit();
    if (t < 0.0 || t > upper)
        throw std::domain_error("szasz_basis requires 0 <= t <= q/(1-q^n)");
    const QParam& q = params.q;
    const double nq = q_integer(params.n, q);
    if (t == 0.0)
        return k == 0 ? 1.0 : 0.0;
    const TruncationPolicy policy{};
    const double e = big_e_q(-nq * t, q, policy).value;
    double ln_fact = 0.0;
    for (int j = 1; j <= k; ++j)
        ln_fact += std::log(q_integer(j, q));
    return e * std::exp(static_cast<double>(k) * std::log(nq * t) - ln_fact);
}

namespace {

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

// ln E_q(z) as a compensated sum of log1p factors; tracks big_e_q's product
// form but stays finite where the plain product would underflow (q -> 1
// pushes E_q(-q/(1-q)) = (q;q)_inf below double range).
double ln_big_e_q(double z, const QParam& q, const TruncationPolicy& policy) {
    const double qv = q.value();
    double u = (1.0 - qv) * z;
    if (1.0 + u <= 0.0)
        throw std::domain_error("ln_big_e_q: non-positive product factor");
    const double factor_tol = policy.tol * std::min(1.0, (1.0 - qv) / qv);
    KahanSum ln;
    int small_run = 0;
    for (int j = 0; j < policy.max_terms; ++j) {
        ln.add(std::log1p(u));
        if (std::abs(u) < factor_tol) {
            if (++small_run >= policy.consecutive_small)
                return ln.sum;
        } else {
            small_run = 0;
        }
        u *= qv;
    }
    throw TruncationError("ln_big_e_q: term cap exhausted", policy.max_terms);
}

} // namespace

StancuEvaluator::StancuEvaluator(const OperatorParams& params,
                                 std::function<double(double)> f,
                                 const TruncationPolicy& policy)
    : params_(params), f_(std::move(f)), policy_(policy) {
    policy_.validate();
    upper_ = params_.upper_limit();
    nq_ = q_integer(params_.n, params_.q);
    lnq_ = std::log(params_.q.value());
    ln_nq_upper_ = std::log(nq_ * upper_); // [n]_q U = q/(1-q)
}

double StancuEvaluator::ln_e_at(int j) {
    if (ln_e_.empty()) {
        // Anchor at j = 0, where the product-vs-series contract is enforced,
        // then advance through E_j = E_{j-1}/(1 - q^j), exact for this node
        // family since (1-q)[n]_q U q^{j-1} = q^j.
        big_e_q(-nq_ * upper_, params_.q, policy_);
        ln_e_.push_back(ln_big_e_q(-nq_ * upper_, params_.q, policy_));
    }
    while (static_cast<int>(ln_e_.size()) <= j) {
        const double jj = static_cast<double>(ln_e_.size());
        const double one_minus_qj = -std::expm1(jj * lnq_);
        ln_e_.push_back(ln_e_.back() - std::log(one_minus_qj));
    }
    return ln_e_[static_cast<std::size_t>(j)];
}

double StancuEvaluator::f_at(int m) {
    const auto eval = [this](int offset) {
        const double arg = (nq_ * upper_ *
                                std::pow(params_.q.value(), offset) +
                            params_.alpha) /
                           (nq_ + params_.beta);
        return f_(arg);
    };
    if (m >= 0) {
        while (static_cast<int>(f_pos_.size()) <= m)
            f_pos_.push_back(eval(static_cast<int>(f_pos_.size())));
        return f_pos_[static_cast<std::size_t>(m)];
    }
    const int idx = -m - 1;
    while (static_cast<int>(f_neg_.size()) <= idx)
        f_neg_.push_back(eval(-static_cast<int>(f_neg_.size()) - 1));
    return f_neg_[static_cast<std::size_t>(idx)];
}

EvalAudit StancuEvaluator::evaluate(double x) {
    if (x < 0.0)
        throw std::domain_error("operator evaluation requires x >= 0");
    const double qv = params_.q.value();
    const double jackson_prefac = (1.0 - qv) * upper_;
    // The inner sums decay at ratio ~ q^{k+1}; stopping at a raw summand
    // below tol would leave a geometric tail of ~ tol q/(1-q), which the
    // outer factor [n]_q then amplifies. Scale the inner threshold so the
    // *tail* stays below tol.
    const double inner_tol = policy_.tol * std::min(1.0, (1.0 - qv) / qv);

    // ln p_{n,k}(x), advanced multiplicatively; kept in log space so the
    // deep pre-peak region at large x cannot underflow to a false zero.
    double ln_basis = -std::log(q_pochhammer(x, params_.n, params_.q));
    double ln_qfact = 0.0; // ln [k]_q!

    KahanSum total;
    EvalAudit audit;
    audit.stop_reason = StopReason::cap;
    int small_run = 0;
    double prev_abs = std::numeric_limits<double>::infinity();

    int k = 0;
    for (; k < policy_.max_terms; ++k) {
        if (k > 0) {
            // p_{n,k} = p_{n,k-1} ([n+k-1]_q/[k]_q) q^{k-1} x/(1+q^{n+k-1} x)
            const double bracket_k = q_integer(k, params_.q);
            const double ratio =
                q_integer(params_.n + k - 1, params_.q) / bracket_k *
                std::pow(qv, k - 1) * x /
                (1.0 + std::pow(qv, params_.n + k - 1) * x);
            ln_basis += std::log(ratio);
            ln_qfact += std::log(bracket_k);
        }

        // Inner Jackson integral of q^{-k-1} s_{n,k}(t) f(...) over [0, U]:
        // summand_j = (1-q) U q^{j(k+1)-k-1} ([n]_q U)^k / [k]_q! E_j f_m.
        KahanSum inner;
        int j_used = 0;
        {
            int j_small = 0;
            double j_prev = std::numeric_limits<double>::infinity();
            bool inner_done = false;
            for (int j = 0; j < policy_.max_terms; ++j) {
                const double ln_w =
                    (static_cast<double>(j) * (k + 1) - k - 1) * lnq_ +
                    static_cast<double>(k) * ln_nq_upper_ - ln_qfact;
                const double s = jackson_prefac *
                                 std::exp(ln_w + ln_e_at(j)) * f_at(j - k);
                if (!std::isfinite(s))
                    throw TruncationError(
                        "operator apply: non-finite inner summand", j);
                inner.add(s);
                const double abs_s = std::abs(s);
                if (abs_s < inner_tol && abs_s <= j_prev) {
                    if (++j_small >= policy_.consecutive_small) {
                        j_used = j + 1;
                        inner_done = true;
                        break;
                    }
                } else {
                    j_small = 0;
                }
                j_prev = abs_s;
            }
            if (!inner_done)
                throw TruncationError(
                    "operator apply: inner Jackson integral cap exhausted",
                    policy_.max_terms);
        }
        audit.max_j_terms = std::max(audit.max_j_terms, j_used);

        // Outer summand [n]_q p_{n,k}(x) I_k, combined in log space.
        double term = 0.0;
        if (inner.sum != 0.0 && std::isfinite(ln_basis)) {
            const double magnitude =
                std::exp(ln_basis + std::log(std::abs(nq_ * inner.sum)));
            term = inner.sum < 0.0 ? -magnitude : magnitude;
        }
        if (!std::isfinite(term))
            throw TruncationError("operator apply: non-finite outer summand",
                                  k);
        total.add(term);

        // Stop only once the summands are both small and non-increasing:
        // at large x the basis climbs from far below tol before its peak,
        // and a plain small-term count would truncate the sum there.
        const double abs_term = std::abs(term);
        if (abs_term < policy_.tol && abs_term <= prev_abs) {
            if (++small_run >= policy_.consecutive_small) {
                audit.stop_reason = StopReason::tolerance;
                ++k;
                break;
            }
        } else {
            small_run = 0;
        }
        prev_abs = abs_term;
    }

    audit.k_terms = std::min(k, policy_.max_terms);
    audit.value = total.sum;
    if (!std::isfinite(audit.value))
        throw TruncationError("operator apply: non-finite value",
                              audit.k_terms);
    return audit;
}

EvalAudit apply(const OperatorParams& params,
                const std::function<double(double)>& f, double x,
                const TruncationPolicy& policy) {
    StancuEvaluator evaluator(params, f, policy);
    return evaluator.evaluate(x);
}

double central_moment(const OperatorParams& params, int r, double x,
                      const TruncationPolicy& policy) {
    if (r != 1 && r != 2)
        throw std::invalid_argument("central_moment supports r in {1, 2}");
    const auto f = [r, x](double t) {
        const double d = t - x;
        return r == 1 ? d : d * d;
    };
    return apply(params, f, x, policy).value;
}

} // namespace qbss
