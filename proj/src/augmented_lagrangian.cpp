#include "mpa/augmented_lagrangian.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "mpa/errors.hpp"

namespace mpa::solver {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

/// Augmented Lagrangian value and gradient for fixed multipliers and penalty.
class Merit {
public:
    Merit(const ConstrainedProblem& prob, std::size_t n)
        : prob_(prob), n_(n), m_(prob.num_eq + prob.num_ineq), c_(m_), jac_(m_ * n) {}

    std::vector<double> multipliers = {};
    double penalty = 1.0;

    double operator()(std::span<const double> x, std::span<double> grad) {
        double value = prob_.objective(x, grad);
        if (m_ == 0) return value;
        prob_.constraints(x, c_, jac_);
        for (std::size_t i = 0; i < m_; ++i) {
            double weight = 0.0;
            if (i < prob_.num_eq) {
                value += multipliers[i] * c_[i] + 0.5 * penalty * c_[i] * c_[i];
                weight = multipliers[i] + penalty * c_[i];
            } else {
                const double shifted = std::max(0.0, multipliers[i] + penalty * c_[i]);
                value += (shifted * shifted - multipliers[i] * multipliers[i]) / (2.0 * penalty);
                weight = shifted;
            }
            if (weight != 0.0) {
                const double* row = jac_.data() + i * n_;
                for (std::size_t j = 0; j < n_; ++j) grad[j] += weight * row[j];
            }
        }
        return value;
    }

    /// Constraint values at the point last passed to constraints().
    void evaluate_constraints(std::span<const double> x) {
        if (m_ > 0) prob_.constraints(x, c_, jac_);
    }

    const std::vector<double>& constraint_values() const { return c_; }

    double violation() const {
        double v = 0.0;
        for (std::size_t i = 0; i < m_; ++i) {
            v = std::max(v, i < prob_.num_eq ? std::abs(c_[i]) : std::max(0.0, c_[i]));
        }
        return v;
    }

private:
    const ConstrainedProblem& prob_;
    std::size_t n_;
    std::size_t m_;
    std::vector<double> c_;
    std::vector<double> jac_;
};

struct InnerResult {
    double stationarity = 0.0;
    int iterations = 0;
};

/// Nonmonotone spectral projected gradient (Birgin, Martinez, Raydan).
InnerResult spectral_projected_gradient(Merit& merit, std::vector<double>& x, const ConstrainedProblem& prob,
                                        double tol, int max_iter) {
    constexpr int kMemory = 10;
    constexpr double kArmijo = 1e-4;
    constexpr double kSigmaLow = 0.1;
    constexpr double kSigmaHigh = 0.9;
    constexpr double kStepMin = 1e-12;
    constexpr double kStepMax = 1e12;

    const std::size_t n = x.size();
    std::vector<double> g(n), trial(n), g_trial(n), d(n), probe(n);
    double value = merit(x, g);
    std::deque<double> history{value};

    auto projected_gradient_norm = [&](std::span<const double> at, std::span<const double> grad) {
        for (std::size_t i = 0; i < n; ++i) probe[i] = at[i] - grad[i];
        project_box(probe, prob.lower, prob.upper);
        double m = 0.0;
        for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(probe[i] - at[i]));
        return m;
    };

    double pg = projected_gradient_norm(x, g);
    double step = pg > 0.0 ? std::clamp(1.0 / pg, kStepMin, kStepMax) : 1.0;
    int it = 0;
    for (; it < max_iter && pg > tol; ++it) {
        for (std::size_t i = 0; i < n; ++i) d[i] = x[i] - step * g[i];
        project_box(d, prob.lower, prob.upper);
        for (std::size_t i = 0; i < n; ++i) d[i] -= x[i];
        const double slope = dot(g, d);
        const double reference = *std::max_element(history.begin(), history.end());

        double lambda = 1.0;
        double trial_value = 0.0;
        for (int ls = 0; ls < 60; ++ls) {
            for (std::size_t i = 0; i < n; ++i) trial[i] = x[i] + lambda * d[i];
            try {
                trial_value = merit(trial, g_trial);
            } catch (const DomainError&) {
                // left the model's domain (e.g. |delta| >= pi/2): shrink the step
                trial_value = std::numeric_limits<double>::infinity();
            }
            if (trial_value <= reference + kArmijo * lambda * slope) break;
            // safeguarded quadratic interpolation
            const double denom = 2.0 * (trial_value - value - lambda * slope);
            double next = (std::isfinite(denom) && denom > 0.0) ? -slope * lambda * lambda / denom : 0.5 * lambda;
            if (next < kSigmaLow * lambda || next > kSigmaHigh * lambda) next = 0.5 * lambda;
            lambda = next;
        }

        double sy = 0.0;
        double ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double s = trial[i] - x[i];
            sy += s * (g_trial[i] - g[i]);
            ss += s * s;
        }
        x.swap(trial);
        g.swap(g_trial);
        value = trial_value;
        history.push_back(value);
        if (history.size() > kMemory) history.pop_front();
        step = sy > 0.0 ? std::clamp(ss / sy, kStepMin, kStepMax) : kStepMax;
        pg = projected_gradient_norm(x, g);
        if (ss == 0.0) break;
    }
    return {pg, it};
}


/// In-place Cholesky factorization of a dense SPD matrix (row-major, lower).
bool cholesky(std::vector<double>& a, std::size_t n) {
    for (std::size_t j = 0; j < n; ++j) {
        double d = a[j * n + j];
        for (std::size_t k = 0; k < j; ++k) d -= a[j * n + k] * a[j * n + k];
        if (!(d > 0.0)) return false;
        d = std::sqrt(d);
        a[j * n + j] = d;
        for (std::size_t i = j + 1; i < n; ++i) {
            double v = a[i * n + j];
            for (std::size_t k = 0; k < j; ++k) v -= a[i * n + k] * a[j * n + k];
            a[i * n + j] = v / d;
        }
    }
    return true;
}

void cholesky_solve(const std::vector<double>& l, std::size_t n, std::vector<double>& b) {
    for (std::size_t i = 0; i < n; ++i) {
        double v = b[i];
        for (std::size_t k = 0; k < i; ++k) v -= l[i * n + k] * b[k];
        b[i] = v / l[i * n + i];
    }
    for (std::size_t ii = n; ii-- > 0;) {
        double v = b[ii];
        for (std::size_t k = ii + 1; k < n; ++k) v -= l[k * n + ii] * b[k];
        b[ii] = v / l[ii * n + ii];
    }
}

/// Two-metric projected quasi-Newton (Bertsekas) with a damped BFGS model.
/// Variables held at a bound by the gradient take plain projected-gradient
/// steps; the remaining ones take a quasi-Newton step.
InnerResult projected_quasi_newton(Merit& merit, std::vector<double>& x, const ConstrainedProblem& prob,
                                   double tol, int max_iter) {
    constexpr double kArmijo = 1e-4;
    constexpr double kActiveEps = 1e-8;
    const std::size_t n = x.size();

    std::vector<double> g(n), trial(n), g_trial(n), step(n), probe(n);
    std::vector<double> hess(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) hess[i * n + i] = 1.0;
    bool scaled = false;

    auto safe_merit = [&](std::span<const double> at, std::span<double> grad) {
        try {
            return merit(at, grad);
        } catch (const DomainError&) {
            return std::numeric_limits<double>::infinity();
        }
    };

    double value = merit(x, g);
    auto projected_gradient_norm = [&]() {
        for (std::size_t i = 0; i < n; ++i) probe[i] = x[i] - g[i];
        project_box(probe, prob.lower, prob.upper);
        double m = 0.0;
        for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(probe[i] - x[i]));
        return m;
    };

    double pg = projected_gradient_norm();
    int it = 0;
    std::vector<std::size_t> free_idx;
    std::vector<double> reduced, rhs;
    for (; it < max_iter && pg > tol; ++it) {
        const double eps = std::min(kActiveEps, pg);
        free_idx.clear();
        std::vector<char> active(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            const bool at_lower = x[i] <= prob.lower[i] + eps && g[i] > 0.0;
            const bool at_upper = x[i] >= prob.upper[i] - eps && g[i] < 0.0;
            active[i] = at_lower || at_upper;
            if (!active[i]) free_idx.push_back(i);
        }
        const std::size_t nf = free_idx.size();
        reduced.assign(nf * nf, 0.0);
        rhs.assign(nf, 0.0);
        for (std::size_t a = 0; a < nf; ++a) {
            rhs[a] = g[free_idx[a]];
            for (std::size_t b = 0; b < nf; ++b) reduced[a * nf + b] = hess[free_idx[a] * n + free_idx[b]];
        }
        if (!cholesky(reduced, nf)) {
            // model lost definiteness numerically; restart it
            std::fill(hess.begin(), hess.end(), 0.0);
            for (std::size_t i = 0; i < n; ++i) hess[i * n + i] = 1.0;
            scaled = false;
            reduced.assign(nf * nf, 0.0);
            for (std::size_t a = 0; a < nf; ++a) reduced[a * nf + a] = 1.0;
        }
        cholesky_solve(reduced, nf, rhs);
        std::fill(step.begin(), step.end(), 0.0);
        for (std::size_t a = 0; a < nf; ++a) step[free_idx[a]] = rhs[a];
        for (std::size_t i = 0; i < n; ++i) {
            if (active[i]) step[i] = g[i];
        }

        double alpha = 1.0;
        double trial_value = value;
        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls) {
            for (std::size_t i = 0; i < n; ++i) trial[i] = x[i] - alpha * step[i];
            project_box(trial, prob.lower, prob.upper);
            double decrease = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                decrease += active[i] ? g[i] * (x[i] - trial[i]) : alpha * g[i] * step[i];
            }
            trial_value = safe_merit(trial, g_trial);
            if (trial_value <= value - kArmijo * decrease) {
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) break;

        // Powell-damped BFGS update of the Hessian model.
        std::vector<double> s(n), y(n), bs(n, 0.0);
        double ss = 0.0, sy = 0.0, sbs = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = trial[i] - x[i];
            y[i] = g_trial[i] - g[i];
            ss += s[i] * s[i];
            sy += s[i] * y[i];
        }
        x.swap(trial);
        g.swap(g_trial);
        value = trial_value;
        pg = projected_gradient_norm();
        if (ss == 0.0) break;

        if (!scaled && sy > 0.0) {
            double yy = 0.0;
            for (double v : y) yy += v * v;
            const double gamma = yy / sy;
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) hess[i * n + j] = (i == j) ? gamma : 0.0;
            }
            scaled = true;
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) bs[i] += hess[i * n + j] * s[j];
            sbs += s[i] * bs[i];
        }
        if (!(sbs > 0.0)) continue;
        const double theta = sy >= 0.2 * sbs ? 1.0 : 0.8 * sbs / (sbs - sy);
        std::vector<double> r(n);
        double sr = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            r[i] = theta * y[i] + (1.0 - theta) * bs[i];
            sr += s[i] * r[i];
        }
        if (!(sr > 0.0)) continue;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                hess[i * n + j] += r[i] * r[j] / sr - bs[i] * bs[j] / sbs;
            }
        }
    }
    return {pg, it};
}

}  // namespace

void project_box(std::span<double> x, std::span<const double> lower, std::span<const double> upper) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], lower[i], upper[i]);
}

SolverResult solve_augmented_lagrangian(const ConstrainedProblem& prob, std::vector<double> x0,
                                        const SolverOptions& opts) {
    const std::size_t n = x0.size();
    if (prob.lower.size() != n || prob.upper.size() != n) {
        throw DomainError("solve_augmented_lagrangian: box dimension mismatch");
    }
    project_box(x0, prob.lower, prob.upper);

    Merit merit(prob, n);
    merit.multipliers.assign(prob.num_eq + prob.num_ineq, 0.0);
    merit.penalty = opts.initial_penalty;

    SolverResult result;
    result.x = x0;
    std::vector<double> x = std::move(x0);
    std::vector<double> scratch(n);

    merit.evaluate_constraints(x);
    double previous_violation = merit.violation();
    double best_violation = std::numeric_limits<double>::infinity();

    for (int outer = 0; outer < opts.max_outer; ++outer) {
        const double inner_tol = std::max(opts.optimality_tol, 1e-2 * std::pow(0.1, outer));
        InnerResult inner = projected_quasi_newton(merit, x, prob, inner_tol, opts.max_inner);
        if (inner.stationarity > inner_tol) {
            const InnerResult polish = spectral_projected_gradient(merit, x, prob, inner_tol, opts.max_inner);
            inner.iterations += polish.iterations;
            inner.stationarity = polish.stationarity;
        }
        result.inner_iterations += inner.iterations;
        result.outer_iterations = outer + 1;

        merit.evaluate_constraints(x);
        const double violation = merit.violation();
        if (violation <= best_violation) {
            best_violation = violation;
            result.x = x;
            result.max_violation = violation;
            result.stationarity = inner.stationarity;
        }
        if (violation <= opts.feasibility_tol && inner.stationarity <= opts.optimality_tol) {
            result.x = x;
            result.max_violation = violation;
            result.stationarity = inner.stationarity;
            result.converged = true;
            break;
        }

        const auto& c = merit.constraint_values();
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (i < prob.num_eq) {
                merit.multipliers[i] += merit.penalty * c[i];
            } else {
                merit.multipliers[i] = std::max(0.0, merit.multipliers[i] + merit.penalty * c[i]);
            }
        }
        if (violation > 0.25 * previous_violation) {
            merit.penalty = std::min(opts.max_penalty, merit.penalty * opts.penalty_growth);
        }
        previous_violation = violation;
    }
    result.objective = prob.objective(result.x, scratch);
    return result;
}

}  // namespace mpa::solver
