#pragma once

// Truncated gradient flows on open subsets of R^n: the normalized descent
// field, RK4 integration with dense output, the energy identity, an
// empirical Palais-Smale check, and the chain that turns (C) into (D).

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "lslab/core.hpp"

namespace lslab::numeric {

inline constexpr double kPi = 3.14159265358979323846;

using Vec = Eigen::VectorXd;

struct ScalarField {
    std::string name;
    int dim = 1;
    std::function<double(const Vec&)> f;
    std::function<Vec(const Vec&)> grad;
    std::function<bool(const Vec&)> in_domain = [](const Vec&) { return true; };
};

struct FlowConfig {
    double tau = 1.0;
    double step = 0;  // 0 means tau / 100
    double tolerance = 1e-5;

    double h() const { return step > 0 ? step : tau / 100; }
};

class LeftDomain : public Error {
public:
    LeftDomain(double t_exit, const std::string& what)
        : Error(Error::Kind::LeftDomain, what), t_exit_(t_exit) {}
    double t_exit() const { return t_exit_; }

private:
    double t_exit_;
};

/// 1 on [0,1], 1 + 2t^2 - t^3 with t = x - 1 on [1,2], x beyond: the cubic
/// Hermite piece matching (1, slope 0) and (2, slope 1).
inline double truncation_g(double x) {
    if (x < 0) throw Error(Error::Kind::InvalidArgument, "g is evaluated on nonnegative reals");
    if (x <= 1) return 1;
    if (x >= 2) return x;
    const double t = x - 1;
    return 1 + 2 * t * t - t * t * t;
}

/// V = -h grad f with h = 1 / g(|grad f|).
inline Vec field_V(const ScalarField& F, const Vec& m) {
    if (!F.in_domain(m)) throw Error(Error::Kind::DomainViolation, "point outside the domain of " + F.name);
    const Vec g = F.grad(m);
    return -g / truncation_g(g.norm());
}

struct Trajectory {
    std::vector<double> t;
    std::vector<Vec> x;
    std::vector<Vec> v;  // V at each node, for the cubic Hermite dense output

    const Vec& endpoint() const { return x.back(); }

    /// Dense output at time s in [t0, t_end].
    Vec at(double s) const {
        if (s <= t.front()) return x.front();
        if (s >= t.back()) return x.back();
        const auto it = std::upper_bound(t.begin(), t.end(), s);
        const std::size_t i = static_cast<std::size_t>(it - t.begin()) - 1;
        const double h = t[i + 1] - t[i];
        const double u = (s - t[i]) / h;
        const double h00 = 2 * u * u * u - 3 * u * u + 1, h10 = u * u * u - 2 * u * u + u;
        const double h01 = -2 * u * u * u + 3 * u * u, h11 = u * u * u - u * u;
        return h00 * x[i] + h10 * h * v[i] + h01 * x[i + 1] + h11 * h * v[i + 1];
    }
};

/// Classical RK4 for dm/dt = V(m) over [0, tau].
inline Trajectory flow_map(const ScalarField& F, const Vec& m0, const FlowConfig& cfg) {
    if (!(cfg.tau > 0)) throw Error(Error::Kind::InvalidArgument, "tau must be positive");
    const int steps = std::max(1, static_cast<int>(std::lround(cfg.tau / cfg.h())));
    const double h = cfg.tau / steps;
    Trajectory tr;
    tr.t.reserve(steps + 1);
    tr.x.reserve(steps + 1);
    tr.v.reserve(steps + 1);
    Vec m = m0;
    auto V = [&](const Vec& p, double t) {
        if (!F.in_domain(p)) throw LeftDomain(t, "trajectory left the domain of " + F.name + " at t = " + std::to_string(t));
        return field_V(F, p);
    };
    Vec k1 = V(m, 0);
    tr.t.push_back(0);
    tr.x.push_back(m);
    tr.v.push_back(k1);
    for (int i = 0; i < steps; ++i) {
        const double t = i * h;
        const Vec k2 = V(m + h / 2 * k1, t + h / 2);
        const Vec k3 = V(m + h / 2 * k2, t + h / 2);
        const Vec k4 = V(m + h * k3, t + h);
        m = m + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
        k1 = V(m, t + h);
        tr.t.push_back(t + h);
        tr.x.push_back(m);
        tr.v.push_back(k1);
    }
    return tr;
}

/// Composite Simpson over the nodes of tr on [0, upto], with midpoints from
/// the dense output.
template <typename Integrand>
double integrate_along(const Trajectory& tr, Integrand&& q, double upto) {
    double sum = 0;
    for (std::size_t i = 0; i + 1 < tr.t.size() && tr.t[i] < upto; ++i) {
        const double a = tr.t[i], b = std::min(tr.t[i + 1], upto);
        const Vec xa = tr.x[i];
        const Vec xb = b < tr.t[i + 1] ? tr.at(b) : tr.x[i + 1];
        sum += (b - a) / 6 * (q(xa) + 4 * q(tr.at((a + b) / 2)) + q(xb));
    }
    return sum;
}

struct EnergyReport {
    double drop = 0;      // f(m) - f(phi_tau(m))
    double integral = 0;  // ∫ h |grad f|^2 dt
    double residual = 0;
};

/// |f(m) - f(phi_tau(m)) - ∫_0^tau h |grad f|^2 dt|.
inline EnergyReport check_energy_identity(const ScalarField& F, const Vec& m, const FlowConfig& cfg) {
    const auto tr = flow_map(F, m, cfg);
    EnergyReport r;
    r.drop = F.f(m) - F.f(tr.endpoint());
    r.integral = integrate_along(
        tr,
        [&](const Vec& p) {
            const double n = F.grad(p).norm();
            return n * n / truncation_g(n);
        },
        cfg.tau);
    r.residual = std::abs(r.drop - r.integral);
    return r;
}

/// Arc length of the trajectory on [0, upto].
inline double path_length(const ScalarField& F, const Trajectory& tr, double upto) {
    return integrate_along(tr, [&](const Vec& p) { return field_V(F, p).norm(); }, upto);
}

// ---------------------------------------------------------------------------
// Field fixtures

/// f(m) = |m|^2 on R^n.
inline ScalarField quadratic(int dim = 2) {
    return {"quadratic", dim, [](const Vec& m) { return m.squaredNorm(); }, [](const Vec& m) { return Vec(2 * m); }};
}

/// f(x) = x^2/2 on ]0,1[. Its time-ln 2 flow map is x -> x/2.
inline ScalarField half_interval() {
    return {"half", 1, [](const Vec& m) { return m(0) * m(0) / 2; }, [](const Vec& m) { return Vec(m); },
            [](const Vec& m) { return m(0) > 0 && m(0) < 1; }};
}

/// f(m) = (|m|^2 - 1)^2 on the open annulus 1/2 < |m| < 2 in R^2; critical
/// along the unit circle.
inline ScalarField annulus() {
    return {"annulus", 2,
            [](const Vec& m) {
                const double s = m.squaredNorm() - 1;
                return s * s;
            },
            [](const Vec& m) { return Vec(4 * (m.squaredNorm() - 1) * m); },
            [](const Vec& m) {
                const double r = m.norm();
                return r > 0.5 && r < 2;
            }};
}

/// f(m) = m^T A m / 2 + b^T m with random symmetric A and random b.
inline ScalarField random_quadratic(std::mt19937_64& rng, int dim) {
    std::normal_distribution<double> N(0, 1);
    Eigen::MatrixXd A(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) A(i, j) = N(rng);
    A = (A + A.transpose()).eval() / 2;
    Vec b(dim);
    for (int i = 0; i < dim; ++i) b(i) = N(rng);
    return {"random_quadratic", dim, [A, b](const Vec& m) { return 0.5 * m.dot(A * m) + b.dot(m); },
            [A, b](const Vec& m) { return Vec(A * m + b); }};
}

inline ScalarField field_by_name(const std::string& name) {
    if (name == "quadratic") return quadratic();
    if (name == "half") return half_interval();
    if (name == "annulus") return annulus();
    throw Error(Error::Kind::InvalidArgument, "unknown field fixture '" + name + "'");
}

/// Largest relative deviation between the analytic gradient and central
/// differences over the given points.
inline double gradient_consistency(const ScalarField& F, const std::vector<Vec>& points, double h = 1e-5) {
    double worst = 0;
    for (const auto& m : points) {
        const Vec g = F.grad(m);
        Vec fd(F.dim);
        for (int i = 0; i < F.dim; ++i) {
            Vec e = Vec::Zero(F.dim);
            e(i) = h;
            fd(i) = (F.f(m + e) - F.f(m - e)) / (2 * h);
        }
        worst = std::max(worst, (g - fd).norm() / std::max(1.0, g.norm()));
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Empirical (C) and (D)

struct ConditionCThresholds {
    double small_gradient = 1e-2;  // samples below this form the cluster
    double critical = 1e-8;        // |grad f| accepted as critical
    double f_bound = 1e6;
    int newton_steps = 60;
};

struct ConditionCReport {
    bool heuristic = true;
    bool bounded_away = false;        // min |grad f| over the samples above the threshold
    bool consistent = true;
    std::vector<Vec> cluster;         // samples with small gradient
    std::optional<Vec> critical_point;  // numerically critical point reached from the cluster
    std::string analysis;
};

/// Samples with small gradient are followed by damped Newton on grad f = 0
/// (finite-difference Jacobian). A critical point reached inside the domain
/// makes the samples consistent with (C); leaving the domain suggests a
/// violation.
inline ConditionCReport check_condition_C(const ScalarField& F, const std::vector<Vec>& samples,
                                          const ConditionCThresholds& th = {}) {
    ConditionCReport r;
    for (const auto& s : samples)
        if (std::abs(F.f(s)) > th.f_bound) throw Error(Error::Kind::InvalidArgument, "|f| is not bounded on the samples");
    std::vector<std::pair<double, std::size_t>> norms;
    for (std::size_t i = 0; i < samples.size(); ++i) norms.emplace_back(F.grad(samples[i]).norm(), i);
    std::sort(norms.begin(), norms.end());
    if (norms.empty() || norms.front().first > th.small_gradient) {
        r.bounded_away = true;
        r.analysis = "|grad f| is bounded away from zero on the samples";
        return r;
    }
    for (const auto& [n, i] : norms)
        if (n <= th.small_gradient) r.cluster.push_back(samples[i]);
    Vec m = samples[norms.front().second];
    for (int it = 0; it < th.newton_steps; ++it) {
        const Vec g = F.grad(m);
        if (g.norm() <= th.critical) break;
        Eigen::MatrixXd J(F.dim, F.dim);
        const double h = 1e-6 * std::max(1.0, m.norm());
        for (int j = 0; j < F.dim; ++j) {
            Vec e = Vec::Zero(F.dim);
            e(j) = h;
            J.col(j) = (F.grad(m + e) - F.grad(m - e)) / (2 * h);
        }
        Vec step = J.completeOrthogonalDecomposition().solve(-g);
        if (!step.allFinite() || step.norm() == 0) break;
        const Vec next = m + step;
        if (!F.in_domain(next)) break;
        m = next;
    }
    auto interior = [&](const Vec& p) {
        const double d = 1e-6 * std::max(1.0, p.norm());
        for (int j = 0; j < F.dim; ++j) {
            Vec e = Vec::Zero(F.dim);
            e(j) = d;
            if (!F.in_domain(p + e) || !F.in_domain(p - e)) return false;
        }
        return true;
    };
    if (!r.critical_point && F.in_domain(m) && F.grad(m).norm() <= th.critical) r.critical_point = m;
    if (r.critical_point && !interior(*r.critical_point)) r.critical_point.reset();
    r.consistent = r.critical_point.has_value();
    r.analysis = r.consistent ? "a critical point lies near the small-gradient cluster"
                              : "the small-gradient cluster accumulates where no critical point lies in the domain";
    return r;
}

/// A map and a function on an open subset of R^n, sampled.
struct SampledPair {
    std::string name;
    int dim = 1;
    std::function<double(const Vec&)> f;
    std::function<Vec(const Vec&)> phi;
    std::function<bool(const Vec&)> in_domain = [](const Vec&) { return true; };
};

/// phi(x) = x/2 and f(x) = x on ]0,1[.
inline SampledPair halving_pair() {
    return {"halving", 1, [](const Vec& m) { return m(0); }, [](const Vec& m) { return Vec(m / 2); },
            [](const Vec& m) { return m(0) > 0 && m(0) < 1; }};
}

struct SampledDReport {
    bool heuristic = true;
    bool holds = true;
    double min_decrement = 0;
    std::optional<Vec> fixed_point;
    std::vector<Vec> cluster;
    std::string analysis;
};

/// Sampled condition (D): when f - f∘phi gets small on the samples, iterate
/// phi from the smallest-decrement sample looking for a fixed point inside
/// the domain.
inline SampledDReport check_condition_D_sampled(const SampledPair& p, const std::vector<Vec>& samples,
                                                double small = 1e-3, double fixed_tol = 1e-10, int iterations = 400) {
    SampledDReport r;
    std::vector<std::pair<double, std::size_t>> gaps;
    for (std::size_t i = 0; i < samples.size(); ++i) gaps.emplace_back(p.f(samples[i]) - p.f(p.phi(samples[i])), i);
    std::sort(gaps.begin(), gaps.end());
    if (gaps.empty()) return r;
    r.min_decrement = gaps.front().first;
    if (r.min_decrement > small) {
        r.analysis = "the decrement is bounded away from zero on the samples";
        return r;
    }
    for (const auto& [g, i] : gaps)
        if (g <= small) r.cluster.push_back(samples[i]);
    Vec x = samples[gaps.front().second];
    for (int k = 0; k < iterations; ++k) {
        const Vec y = p.phi(x);
        if (!p.in_domain(y)) break;
        if ((y - x).norm() <= fixed_tol && (y - x).norm() <= fixed_tol * std::max(1.0, x.norm())) {
            if (std::abs(p.f(x) - p.f(y)) <= fixed_tol && x.norm() > fixed_tol * 1e3) r.fixed_point = y;
            break;
        }
        x = y;
    }
    r.holds = r.fixed_point.has_value();
    r.analysis = r.holds ? "a fixed point lies in the closure of the small-decrement samples"
                         : "the decrement tends to zero but the iterates approach no fixed point inside the domain";
    return r;
}

// ---------------------------------------------------------------------------
// From (C) to (D) along the flow

struct ChainStep {
    int n = 0;
    Vec a, b;
    double decrement = 0;     // f(a_n) - f(phi_tau(a_n)), below tau / n
    double t = 0;             // t_n
    double grad_sq = 0;       // |grad f(b_n)|^2, below 1/n
    double f_b = 0;           // |f(b_n)|, at most c + tau
    double length = 0;        // arc length from a_n to b_n
    double distance = 0;      // |b_n - a_n|
    double bound = 0;         // tau / sqrt(n)
    bool gradient_ok = false, level_ok = false, length_ok = false;
};

struct FlowChainReport {
    double tau = 0;
    double c = 0;  // sup |f(a_n)|
    std::vector<ChainStep> steps;
    bool chain_holds = false;
    bool conclusion_holds = false;  // b* is a fixed point of phi_tau inside the domain
    std::optional<Vec> limit;       // b*
    std::string analysis;
};

struct FlowChainConfig {
    FlowConfig flow{};
    std::vector<int> n_values{1, 10, 100, 1000, 10000};
    double length_factor = 1.1;
    std::function<Vec(double)> probe;  // s -> point, approaching the suspect region as s -> 0
    double s_max = 1;
};

/// Builds a_n along the probe with f(a_n) - f(phi_tau(a_n)) < tau/n, then
/// checks the gradient, level and path-length bounds and whether the limit
/// of b_n is a rest point of the flow inside the domain.
inline FlowChainReport verify_flow_chain(const ScalarField& F, const FlowChainConfig& cfg) {
    if (!cfg.probe) throw Error(Error::Kind::InvalidArgument, "a probe curve is required");
    const double tau = cfg.flow.tau;
    FlowChainReport r;
    r.tau = tau;
    auto drop = [&](const Vec& m) {
        const auto tr = flow_map(F, m, cfg.flow);
        return F.f(m) - F.f(tr.endpoint());
    };
    std::vector<Vec> as;
    for (int n : cfg.n_values) {
        double s = cfg.s_max;
        bool ok = false;
        for (int k = 0; k < 80; ++k, s /= 2) {
            const Vec m = cfg.probe(s);
            if (!F.in_domain(m)) continue;
            try {
                if (drop(m) < tau / n) {
                    ok = true;
                    break;
                }
            } catch (const LeftDomain&) {
            }
        }
        if (!ok)
            throw Error(Error::Kind::FixtureUnconstructible,
                        "no point along the probe has decrement below tau/" + std::to_string(n));
        as.push_back(cfg.probe(s));
    }
    for (const auto& a : as) r.c = std::max(r.c, std::abs(F.f(a)));
    r.chain_holds = true;
    for (std::size_t i = 0; i < as.size(); ++i) {
        ChainStep st;
        st.n = cfg.n_values[i];
        st.a = as[i];
        const auto tr = flow_map(F, st.a, cfg.flow);
        st.decrement = F.f(st.a) - F.f(tr.endpoint());
        std::size_t best = 0;
        double best_sq = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < tr.x.size(); ++k) {
            const double g = F.grad(tr.x[k]).squaredNorm();
            if (g < best_sq) {
                best_sq = g;
                best = k;
            }
        }
        st.t = tr.t[best];
        st.b = tr.x[best];
        st.grad_sq = best_sq;
        st.f_b = std::abs(F.f(st.b));
        st.length = path_length(F, tr, st.t);
        st.distance = (st.b - st.a).norm();
        st.bound = tau / std::sqrt(static_cast<double>(st.n));
        st.gradient_ok = st.grad_sq < 1.0 / st.n;
        st.level_ok = st.f_b <= r.c + tau;
        st.length_ok = st.length <= cfg.length_factor * st.bound;
        r.chain_holds = r.chain_holds && st.gradient_ok && st.level_ok && st.length_ok;
        r.steps.push_back(std::move(st));
    }
    const Vec& b = r.steps.back().b;
    r.limit = b;
    bool rest = false;
    if (F.in_domain(b)) {
        try {
            const auto tr = flow_map(F, b, cfg.flow);
            rest = (tr.endpoint() - b).norm() <= 1e-3 * std::max(1.0, b.norm()) && F.grad(b).norm() <= 1e-2;
            // a genuine rest point does not drift toward the boundary
            rest = rest && F.grad(b).norm() <= std::sqrt(1.0 / r.steps.back().n);
            if (rest) {
                Vec z = b;
                for (int k = 0; k < 200 && F.in_domain(z) && F.grad(z).norm() > 1e-9; ++k) z = flow_map(F, z, cfg.flow).endpoint();
                rest = F.in_domain(z) && F.grad(z).norm() <= 1e-9;
                r.limit = z;
            }
        } catch (const LeftDomain&) {
            rest = false;
        }
    }
    r.conclusion_holds = rest;
    r.analysis = rest ? "b_n converge to a rest point of the flow in the closure of {a_n}"
                      : "b_n accumulate where the flow has no rest point inside the domain: condition (D) fails";
    return r;
}

// ---------------------------------------------------------------------------
// A circle map fixing the right half: f(F) is an interval

struct HalfFixedCircle {
    std::vector<Vec> fixed;             // sampled fixed points
    std::vector<double> fixed_values;   // f on them, ascending
    double largest_value_gap = 0;       // shrinks with the sample count: f(F) is not discrete
    bool lyapunov = true;
};

/// phi(x,y) = (x,y) for x >= 0 and lowers y for x < 0; f(x,y) = y.
inline HalfFixedCircle half_fixed_circle(int samples) {
    HalfFixedCircle r;
    auto phi = [](double th) {
        const double x = std::cos(th);
        if (x >= 0) return th;
        // move toward the bottom point th = 3pi/2 along the left half
        return th + 0.5 * (3 * kPi / 2 - th) * (-x);
    };
    for (int i = 0; i < samples; ++i) {
        const double th = kPi / 2 + 2 * kPi * i / samples;
        const double th2 = phi(th);
        const double y = std::sin(th), y2 = std::sin(th2);
        if (std::abs(th2 - th) < 1e-15) {
            Vec p(2);
            p << std::cos(th), y;
            r.fixed.push_back(p);
            r.fixed_values.push_back(y);
        } else if (!(y2 < y)) {
            r.lyapunov = false;
        }
    }
    std::sort(r.fixed_values.begin(), r.fixed_values.end());
    for (std::size_t i = 1; i < r.fixed_values.size(); ++i)
        r.largest_value_gap = std::max(r.largest_value_gap, r.fixed_values[i] - r.fixed_values[i - 1]);
    return r;
}

}  // namespace lslab::numeric
