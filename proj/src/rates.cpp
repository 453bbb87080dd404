#include "qbss/rates.hpp"

#include <algorithm>
#include <cmath>

#include "qbss/moments.hpp"

namespace qbss {

namespace {

std::vector<double> sample_grid(const std::function<double(double)>& f,
                                double lo, double hi, int grid_points) {
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(grid_points));
    const double step = (hi - lo) / (grid_points - 1);
    for (int i = 0; i < grid_points; ++i)
        values.push_back(f(lo + step * i));
    return values;
}

// Largest adjacent difference quotient: the grid Lipschitz estimate used
// for slack terms and the nondecreasing spot-check.
double grid_lipschitz(const std::vector<double>& values, double step) {
    double worst = 0.0;
    for (std::size_t i = 1; i < values.size(); ++i)
        worst = std::max(worst, std::abs(values[i] - values[i - 1]) / step);
    return worst;
}

} // namespace

ModulusEstimate modulus(const std::function<double(double)>& f, double delta,
                        double lo, double hi, int grid_points) {
    if (!(delta > 0.0))
        throw std::invalid_argument("modulus requires delta > 0");
    if (!(lo < hi) || grid_points < 2)
        throw std::invalid_argument("modulus requires lo < hi and >= 2 points");
    const double step = (hi - lo) / (grid_points - 1);
    const std::vector<double> values = sample_grid(f, lo, hi, grid_points);
    // sup over pairs within delta == sup over windows of width delta of
    // (max - min); slide the window once over the grid.
    const int window = static_cast<int>(std::floor(delta / step + 1e-9));
    double omega = 0.0;
    for (int i = 0; i < grid_points; ++i) {
        double w_min = values[static_cast<std::size_t>(i)];
        double w_max = w_min;
        const int j_hi = std::min(grid_points - 1, i + window);
        for (int j = i + 1; j <= j_hi; ++j) {
            const double v = values[static_cast<std::size_t>(j)];
            w_min = std::min(w_min, v);
            w_max = std::max(w_max, v);
        }
        omega = std::max(omega, w_max - w_min);
    }
    return {delta, omega, step};
}

double lipschitz_maximal(const std::function<double(double)>& f,
                         double alpha_exp, double x,
                         const std::vector<double>& t_grid) {
    if (!(alpha_exp > 0.0) || alpha_exp > 1.0)
        throw std::invalid_argument("alpha_exp must lie in (0,1]");
    const double fx = f(x);
    double sup = 0.0;
    for (const double t : t_grid) {
        const double gap = std::abs(t - x);
        if (gap < 1e-9)
            continue;
        sup = std::max(sup, std::abs(f(t) - fx) / std::pow(gap, alpha_exp));
    }
    return sup;
}

double dist_to_set(double x, double e_lo, double e_hi) {
    if (e_lo > e_hi)
        throw std::invalid_argument("dist_to_set requires E_lo <= E_hi");
    if (x >= e_lo && x <= e_hi)
        return 0.0;
    return x < e_lo ? e_lo - x : x - e_hi;
}

ExperimentReport pointwise_bound_check(const OperatorParams& params,
                                       const std::function<double(double)>& f,
                                       const std::vector<double>& x_grid,
                                       const TruncationPolicy& policy) {
    if (x_grid.empty())
        throw std::invalid_argument("pointwise_bound_check needs an x grid");
    const double x_max = *std::max_element(x_grid.begin(), x_grid.end());
    const double lo = 0.0;
    const double hi = x_max + 1.0;
    const int grid_points = 2001;
    const double step = (hi - lo) / (grid_points - 1);

    const std::vector<double> values = sample_grid(f, lo, hi, grid_points);
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i] < values[i - 1] - 1e-12)
            throw std::invalid_argument(
                "pointwise_bound_check: f fails the nondecreasing spot-check");

    const double lip = grid_lipschitz(values, step);
    // Two slack sources: the grid-sup omega underestimates the true modulus
    // by up to the grid Lipschitz correction, and the numeric lhs carries
    // the operator's own evaluation noise (1e-8 is its documented accuracy,
    // visible when rhs is exactly 0 for constant f).
    const double slack = 2.0 * lip * step;
    double f_scale = 1.0;
    for (const double v : values)
        f_scale = std::max(f_scale, std::abs(v));
    const double eval_noise = 1e-8 * f_scale;

    ExperimentReport report({"x", "lhs", "delta_n", "omega", "rhs", "holds"});
    bool all_hold = true;
    StancuEvaluator evaluator(params, f, policy);
    for (const double x : x_grid) {
        const double lhs = std::abs(evaluator.evaluate(x).value - f(x));
        const double dn = delta_n(params, x);
        const double omega_est =
            modulus(f, std::sqrt(dn), lo, hi, grid_points).omega;
        const double rhs = 2.0 * omega_est;
        const bool holds = lhs <= rhs + slack + eval_noise;
        all_hold &= holds;
        report.add_row({x, lhs, dn, omega_est, rhs, holds ? 1.0 : 0.0});
    }
    report.meta()["pass"] = all_hold;
    report.meta()["grid_slack"] = slack;
    report.meta()["eval_noise"] = eval_noise;
    report.meta()["modulus_domain"] = {lo, hi};
    report.meta()["modulus_grid_points"] = grid_points;
    return report;
}

CsCheck cauchy_schwarz_q_check(double a, double b, const QParam& q, double x,
                               const TruncationPolicy& policy) {
    q.require_sub_one("cauchy_schwarz_q_check");
    if (!(b > 0.0) || a < 0.0)
        throw std::invalid_argument("cauchy_schwarz_q_check requires b > 0, a >= 0");
    if (a > b * q.value())
        throw std::invalid_argument(
            "cauchy_schwarz_q_check requires a in [0, b q]");

    const auto segment = [&](const std::function<double(double)>& g) {
        const double upper = jackson_integral(g, b, q, policy).value;
        const double lower =
            a > 0.0 ? jackson_integral(g, a, q, policy).value : 0.0;
        return upper - lower;
    };

    const double m1 = segment([x](double t) { return std::abs(t - x); });
    const double m2 = segment([x](double t) { return (t - x) * (t - x); });
    const double m0 = segment([](double) { return 1.0; });

    CsCheck result;
    result.lhs = m1;
    result.rhs = std::sqrt(std::max(0.0, m2)) * std::sqrt(std::max(0.0, m0));
    result.holds = result.lhs <= result.rhs + 1e-12;
    return result;
}

ExperimentReport maximal_bound_check(const OperatorParams& params,
                                     const std::function<double(double)>& f,
                                     double alpha_exp, double e_lo, double e_hi,
                                     const std::vector<double>& x_grid,
                                     const TruncationPolicy& policy) {
    if (x_grid.empty())
        throw std::invalid_argument("maximal_bound_check needs an x grid");
    if (e_lo > e_hi || e_lo < 0.0)
        throw std::invalid_argument("maximal_bound_check: bad set E");

    // Calibration grid for the maximal-function constant: log-spaced t,
    // evaluated at the closure points of E actually used by the bound.
    std::vector<double> t_grid;
    {
        const int points = 500;
        const double t_lo = 1e-4;
        const double t_hi = 50.0;
        const double factor =
            std::pow(t_hi / t_lo, 1.0 / static_cast<double>(points - 1));
        double t = t_lo;
        for (int i = 0; i < points; ++i, t *= factor)
            t_grid.push_back(t);
    }
    double m_hat = 0.0;
    for (const double x : x_grid) {
        const double x0 = std::clamp(x, e_lo, e_hi);
        m_hat = std::max(m_hat, lipschitz_maximal(f, alpha_exp, x0, t_grid));
    }
    const double m_est = 1.25 * m_hat; // grid sup is a lower bound
    double f_scale = 1.0;
    for (const double x : x_grid)
        f_scale = std::max(f_scale, std::abs(f(x)));
    const double eval_noise = 1e-8 * f_scale; // operator evaluation accuracy

    ExperimentReport report({"x", "lhs", "delta_n", "dist", "rhs", "holds"});
    bool all_hold = true;
    StancuEvaluator evaluator(params, f, policy);
    for (const double x : x_grid) {
        const double lhs = std::abs(evaluator.evaluate(x).value - f(x));
        const double dn = delta_n(params, x);
        const double dist = dist_to_set(x, e_lo, e_hi);
        const double rhs = m_est * (std::pow(dn, alpha_exp / 2.0) + dist);
        const bool holds = lhs <= rhs + eval_noise;
        all_hold &= holds;
        report.add_row({x, lhs, dn, dist, rhs, holds ? 1.0 : 0.0});
    }
    report.meta()["pass"] = all_hold;
    report.meta()["eval_noise"] = eval_noise;
    report.meta()["M_est"] = m_est;
    report.meta()["alpha_exp"] = alpha_exp;
    report.meta()["E_lo"] = e_lo;
    report.meta()["E_hi"] =
        std::isinf(e_hi) ? nlohmann::json("inf") : nlohmann::json(e_hi);
    return report;
}

} // namespace qbss
