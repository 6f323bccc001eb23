#include "mpa/shooting.hpp"

#include <algorithm>

#include "mpa/errors.hpp"

namespace mpa {

namespace {

StateVector shifted(const State& x, double a, const StateVector& k) {
    StateVector r = to_vector(x);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += a * k[i];
    return r;
}

StateVector transpose_times(const std::array<double, 25>& j, const StateVector& a) {
    StateVector r{};
    for (std::size_t row = 0; row < 5; ++row) {
        for (std::size_t col = 0; col < 5; ++col) r[col] += j[row * 5 + col] * a[row];
    }
    return r;
}

Input input_at(std::span<const double> u, int k) { return {u[2 * k], u[2 * k + 1]}; }

}  // namespace

void rk4_step_vjp(const State& x, const Input& u, double h, const VehicleParams& p, const StateVector& out_adj,
                  StateVector& x_adj, Input& u_adj) {
    const StateVector k1 = eval_dynamics(x, u, p);
    const State x2 = from_vector(shifted(x, h / 2, k1));
    const StateVector k2 = eval_dynamics(x2, u, p);
    const State x3 = from_vector(shifted(x, h / 2, k2));
    const StateVector k3 = eval_dynamics(x3, u, p);
    const State x4 = from_vector(shifted(x, h, k3));

    StateVector k1_adj, k2_adj, k3_adj, k4_adj;
    for (std::size_t i = 0; i < 5; ++i) {
        x_adj[i] += out_adj[i];
        k1_adj[i] = h / 6.0 * out_adj[i];
        k2_adj[i] = h / 3.0 * out_adj[i];
        k3_adj[i] = h / 3.0 * out_adj[i];
        k4_adj[i] = h / 6.0 * out_adj[i];
    }
    auto stage = [&](const State& xs, const StateVector& k_adj, StateVector* prev_k_adj, double scale) {
        const StateVector xs_adj = transpose_times(dynamics_state_jacobian(xs, p), k_adj);
        u_adj.accel += k_adj[3];
        u_adj.steer_rate += k_adj[4];
        for (std::size_t i = 0; i < 5; ++i) {
            x_adj[i] += xs_adj[i];
            if (prev_k_adj) (*prev_k_adj)[i] += scale * xs_adj[i];
        }
    };
    stage(x4, k4_adj, &k3_adj, h);
    stage(x3, k3_adj, &k2_adj, h / 2);
    stage(x2, k2_adj, &k1_adj, h / 2);
    stage(x, k1_adj, nullptr, 0.0);
}

ShootingTranscription::ShootingTranscription(ManeuverProblem prob) : prob_(std::move(prob)) {
    if (prob_.intervals < 1) throw DomainError("maneuver problem: intervals must be >= 1");
    if (!(prob_.duration > 0.0)) throw DomainError("maneuver problem: duration must be > 0");
}

State ShootingTranscription::initial_state() const { return {0.0, 0.0, 0.0, prob_.from.v, prob_.from.delta}; }

std::vector<State> ShootingTranscription::rollout(std::span<const double> u) const {
    const double h = interval();
    std::vector<State> states;
    states.reserve(prob_.intervals + 1);
    states.push_back(initial_state());
    for (int k = 0; k < prob_.intervals; ++k) {
        states.push_back(integrate_step(states.back(), input_at(u, k), h, prob_.params));
    }
    return states;
}

std::vector<double> ShootingTranscription::initial_guess() const {
    const double a = (prob_.to.v - prob_.from.v) / prob_.duration;
    const double r = (prob_.to.delta - prob_.from.delta) / prob_.duration;
    std::vector<double> u(num_variables());
    for (int k = 0; k < prob_.intervals; ++k) {
        u[2 * k] = a;
        u[2 * k + 1] = r;
    }
    return u;
}

std::vector<double> ShootingTranscription::lower_bounds() const {
    std::vector<double> lo(num_variables());
    for (int k = 0; k < prob_.intervals; ++k) {
        lo[2 * k] = -prob_.params.accel_max;
        lo[2 * k + 1] = -prob_.params.steer_rate_max;
    }
    return lo;
}

std::vector<double> ShootingTranscription::upper_bounds() const {
    std::vector<double> hi(num_variables());
    for (int k = 0; k < prob_.intervals; ++k) {
        hi[2 * k] = prob_.params.accel_max;
        hi[2 * k + 1] = prob_.params.steer_rate_max;
    }
    return hi;
}

double ShootingTranscription::j1(std::span<const double> u, std::span<double> grad) const {
    const int n = prob_.intervals;
    const double h = interval();
    const std::vector<State> xs = rollout(u);
    double value = 0.0;
    for (int k = 0; k <= n; ++k) {
        const double w = (k == 0 || k == n) ? 0.5 * h : h;
        value -= w * (xs[k].sx * xs[k].sx + xs[k].sy * xs[k].sy);
    }
    if (grad.empty()) return value;

    std::fill(grad.begin(), grad.end(), 0.0);
    StateVector adj{};
    adj[0] = -0.5 * h * 2.0 * xs[n].sx;
    adj[1] = -0.5 * h * 2.0 * xs[n].sy;
    for (int k = n - 1; k >= 0; --k) {
        StateVector x_adj{};
        Input u_adj{};
        rk4_step_vjp(xs[k], input_at(u, k), h, prob_.params, adj, x_adj, u_adj);
        grad[2 * k] = u_adj.accel;
        grad[2 * k + 1] = u_adj.steer_rate;
        const double w = (k == 0) ? 0.5 * h : h;
        x_adj[0] -= w * 2.0 * xs[k].sx;
        x_adj[1] -= w * 2.0 * xs[k].sy;
        adj = x_adj;
    }
    return value;
}

double ShootingTranscription::j2(std::span<const double> u, std::span<double> grad) const {
    const double h = interval();
    double value = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) value += h * u[i] * u[i];
    if (!grad.empty()) {
        for (std::size_t i = 0; i < u.size(); ++i) grad[i] = 2.0 * h * u[i];
    }
    return value;
}

void ShootingTranscription::constraints(std::span<const double> u, std::span<double> c,
                                        std::span<double> jac) const {
    const int n = prob_.intervals;
    const std::size_t nv = num_variables();
    const double h = interval();
    const VehicleParams& p = prob_.params;
    const std::vector<State> xs = rollout(u);

    std::fill(jac.begin(), jac.end(), 0.0);
    // v_k and delta_k depend linearly on the controls of earlier intervals.
    auto fill_row = [&](std::size_t row, int node, int channel, double sign) {
        double* r = jac.data() + row * nv;
        for (int i = 0; i < node; ++i) r[2 * i + channel] = sign * h;
    };

    c[0] = xs[n].v - prob_.to.v;
    fill_row(0, n, 0, 1.0);
    c[1] = xs[n].delta - prob_.to.delta;
    fill_row(1, n, 1, 1.0);

    std::size_t row = kNumEq;
    for (int k = 1; k < n; ++k) {
        c[row] = xs[k].v - p.v_max;
        fill_row(row++, k, 0, 1.0);
        c[row] = p.v_min - xs[k].v;
        fill_row(row++, k, 0, -1.0);
        c[row] = xs[k].delta - p.delta_max;
        fill_row(row++, k, 1, 1.0);
        c[row] = -p.delta_max - xs[k].delta;
        fill_row(row++, k, 1, -1.0);
    }
}

}  // namespace mpa
