#include "mpa/vehicle_model.hpp"

#include <cmath>
#include <string>

#include "mpa/errors.hpp"

namespace mpa {

namespace {

void require_finite(const State& x, const Input& u) {
    const double vals[] = {x.sx, x.sy, x.psi, x.v, x.delta, u.accel, u.steer_rate};
    for (double v : vals) {
        if (!std::isfinite(v)) {
            throw DomainError("eval_dynamics: non-finite state or input component");
        }
    }
}

StateVector axpy(const StateVector& x, double a, const StateVector& k) {
    StateVector r;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = x[i] + a * k[i];
    return r;
}

}  // namespace

StateVector to_vector(const State& x) { return {x.sx, x.sy, x.psi, x.v, x.delta}; }

State from_vector(const StateVector& a) { return {a[0], a[1], a[2], a[3], a[4]}; }

void validate(const VehicleParams& p) {
    auto fail = [](const std::string& m) { throw ConfigError("vehicle params: " + m); };
    if (!(p.wheelbase > 0.0)) fail("wheelbase must be > 0");
    if (!(p.rear_to_cg >= 0.0 && p.rear_to_cg <= p.wheelbase)) fail("rear_to_cg must lie in [0, wheelbase]");
    if (!(p.v_min <= p.v_max)) fail("v_min must not exceed v_max");
    if (!(p.delta_max > 0.0 && p.delta_max < std::numbers::pi / 2)) fail("delta_max must lie in (0, pi/2)");
    if (!(p.accel_max > 0.0)) fail("accel_max must be > 0");
    if (!(p.steer_rate_max > 0.0)) fail("steer_rate_max must be > 0");
    if (!(p.footprint_radius > 0.0)) fail("footprint_radius must be > 0");
}

double sideslip_beta(double delta, const VehicleParams& p) {
    if (!(std::abs(delta) < std::numbers::pi / 2)) {
        throw DomainError("sideslip_beta: |delta| must be below pi/2");
    }
    return std::atan(p.rear_to_cg / p.wheelbase * std::tan(delta));
}

StateVector eval_dynamics(const State& x, const Input& u, const VehicleParams& p) {
    require_finite(x, u);
    const double beta = sideslip_beta(x.delta, p);
    const double heading = x.psi + beta;
    return {
        x.v * std::cos(heading),
        x.v * std::sin(heading),
        x.v / p.wheelbase * std::tan(x.delta) * std::cos(beta),
        u.accel,
        u.steer_rate,
    };
}

std::array<double, 25> dynamics_state_jacobian(const State& x, const VehicleParams& p) {
    const double rho = p.rear_to_cg / p.wheelbase;
    const double t = std::tan(x.delta);
    const double q = 1.0 + rho * rho * t * t;
    const double beta = std::atan(rho * t);
    const double dbeta = rho * (1.0 + t * t) / q;
    const double c = std::cos(x.psi + beta);
    const double s = std::sin(x.psi + beta);

    std::array<double, 25> j{};
    // row 0: v cos(psi + beta)
    j[0 * 5 + 2] = -x.v * s;
    j[0 * 5 + 3] = c;
    j[0 * 5 + 4] = -x.v * s * dbeta;
    // row 1: v sin(psi + beta)
    j[1 * 5 + 2] = x.v * c;
    j[1 * 5 + 3] = s;
    j[1 * 5 + 4] = x.v * c * dbeta;
    // row 2: v/L tan(delta) cos(beta) = v/L * t / sqrt(q)
    j[2 * 5 + 3] = t / std::sqrt(q) / p.wheelbase;
    j[2 * 5 + 4] = x.v / p.wheelbase * (1.0 + t * t) / (q * std::sqrt(q));
    return j;
}

State integrate_step(const State& x, const Input& u, double dt, const VehicleParams& p) {
    if (!(dt > 0.0)) throw DomainError("integrate_step: dt must be > 0");
    const StateVector x0 = to_vector(x);
    const StateVector k1 = eval_dynamics(x, u, p);
    const StateVector k2 = eval_dynamics(from_vector(axpy(x0, dt / 2, k1)), u, p);
    const StateVector k3 = eval_dynamics(from_vector(axpy(x0, dt / 2, k2)), u, p);
    const StateVector k4 = eval_dynamics(from_vector(axpy(x0, dt, k3)), u, p);
    StateVector r;
    for (std::size_t i = 0; i < r.size(); ++i) {
        r[i] = x0[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return from_vector(r);
}

State integrate(const State& x, const Input& u, double duration, int substeps, const VehicleParams& p) {
    if (substeps < 1) throw DomainError("integrate: substeps must be >= 1");
    const double dt = duration / substeps;
    State s = x;
    for (int i = 0; i < substeps; ++i) s = integrate_step(s, u, dt, p);
    return s;
}

double normalize_angle(double a) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double r = std::fmod(a, two_pi);
    if (r <= -std::numbers::pi) r += two_pi;
    if (r > std::numbers::pi) r -= two_pi;
    return r;
}

State apply_group(const GroupElement& g, const State& x) {
    const double c = std::cos(g.dpsi);
    const double s = std::sin(g.dpsi);
    return {
        c * x.sx - s * x.sy + g.dx,
        s * x.sx + c * x.sy + g.dy,
        x.psi + g.dpsi,
        x.v,
        x.delta,
    };
}

GroupElement compose_group(const GroupElement& a, const GroupElement& b) {
    const double c = std::cos(a.dpsi);
    const double s = std::sin(a.dpsi);
    return {a.dx + c * b.dx - s * b.dy, a.dy + s * b.dx + c * b.dy, a.dpsi + b.dpsi};
}

GroupElement invert_group(const GroupElement& g) {
    const double c = std::cos(g.dpsi);
    const double s = std::sin(g.dpsi);
    return {-(c * g.dx + s * g.dy), -(-s * g.dx + c * g.dy), -g.dpsi};
}

}  // namespace mpa
