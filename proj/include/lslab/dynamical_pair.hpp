#pragma once

// A self-map of a finite space together with a real function on its points,
// and the Lyapunov / condition (D) checks on such pairs.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lslab/core.hpp"
#include "lslab/space.hpp"

namespace lslab {

/// Upper band end; `infinite` means f^b = X.
struct Bound {
    double value = 0;
    bool infinite = false;

    static Bound inf() { return Bound{0, true}; }
    std::string str() const;
};

class DynamicalPair {
public:
    DynamicalPair(FiniteSpace X, SpaceMap phi, std::vector<double> f)
        : X_(std::move(X)), phi_(std::move(phi)), f_(std::move(f)) {
        if (phi_.source_size() != X_.size() || phi_.domain() != X_.all())
            throw Error(Error::Kind::InvalidArgument, "map must be defined on every point");
        if (!phi_.is_order_preserving(X_, X_)) throw Error(Error::Kind::InvalidArgument, "map is not continuous");
        if (f_.size() != X_.size()) throw Error(Error::Kind::InvalidArgument, "function needs one value per point");
        for (double v : f_)
            if (!std::isfinite(v)) throw Error(Error::Kind::InvalidArgument, "function values must be finite");
        fixed_ = phi_.fixed_points();
    }

    const FiniteSpace& space() const { return X_; }
    const SpaceMap& map() const { return phi_; }
    const std::vector<double>& values() const { return f_; }
    double f(std::size_t x) const { return f_[x]; }

    /// F: the fixed points of phi.
    PointSet fixed() const { return fixed_; }

    /// f^a = {x : f(x) <= a}.
    PointSet sublevel(double a) const {
        PointSet s = 0;
        for (std::size_t x = 0; x < f_.size(); ++x)
            if (f_[x] <= a) s |= bit(x);
        return s;
    }

    PointSet sublevel(const Bound& b) const { return b.infinite ? X_.all() : sublevel(b.value); }

    /// {x : f(x) < c}, the sublevel just below c.
    PointSet strict_sublevel(double c) const {
        PointSet s = 0;
        for (std::size_t x = 0; x < f_.size(); ++x)
            if (f_[x] < c) s |= bit(x);
        return s;
    }

    PointSet level(double d) const {
        PointSet s = 0;
        for (std::size_t x = 0; x < f_.size(); ++x)
            if (f_[x] == d) s |= bit(x);
        return s;
    }

    /// f^{-1}]a, b].
    PointSet band(double a, const Bound& b) const { return sublevel(b) & ~sublevel(a); }
    PointSet band(double a, double b) const { return band(a, Bound{b}); }

    /// f^{-1}[a, b].
    PointSet closed_band(double a, double b) const { return sublevel(b) & ~strict_sublevel(a); }

    /// F_d = F ∩ f^{-1}(d).
    PointSet slice(double d) const { return fixed_ & level(d); }

    /// Distinct values of f on s, ascending.
    std::vector<double> values_on(PointSet s) const {
        std::set<double> v;
        for_each_point(s, [&](std::size_t x) { v.insert(f_[x]); });
        return {v.begin(), v.end()};
    }

    /// f(F) ∩ ]a, b], ascending.
    std::vector<double> critical_levels(double a, const Bound& b) const { return values_on(fixed_ & band(a, b)); }

    /// Half the least positive difference between distinct f-values (1 when
    /// f is constant).
    double half_gap() const {
        const auto v = values_on(X_.all());
        double g = std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i < v.size(); ++i) g = std::min(g, v[i] - v[i - 1]);
        return std::isfinite(g) ? g / 2 : 1.0;
    }

private:
    FiniteSpace X_;
    SpaceMap phi_;
    std::vector<double> f_;
    PointSet fixed_ = 0;
};

struct LyapunovVerdict {
    bool holds = true;
    std::optional<std::size_t> witness;  // a non-fixed x with f(phi(x)) >= f(x)
};

inline LyapunovVerdict is_lyapunov(const DynamicalPair& p) {
    for (std::size_t x = 0; x < p.space().size(); ++x) {
        const auto y = p.map()(x);
        if (y != x && !(p.f(y) < p.f(x))) return {false, x};
    }
    return {};
}

struct ConditionDReport {
    bool holds = false;
    LyapunovVerdict lyapunov;
    bool exhaustive = false;              // every subset of Y was examined
    std::optional<PointSet> witness;      // subset violating the closure clause
    std::string analysis;
};

/// On a finite space every infimum over a subset is attained, so a vanishing
/// decrement occurs at a point y with f(phi(y)) = f(y); for a Lyapunov
/// function y is fixed and lies in the closure of the subset. Condition (D)
/// therefore reduces to the Lyapunov property. Up to 12 points of Y, the
/// closure clause is also checked subset by subset.
inline ConditionDReport check_condition_D(const DynamicalPair& p, PointSet Y, std::size_t exhaustive_cap = 12) {
    ConditionDReport r;
    r.lyapunov = is_lyapunov(p);
    if (!r.lyapunov.holds) {
        r.analysis = "f is not a Lyapunov function for the map: " + p.space().label(*r.lyapunov.witness) +
                     " is not fixed and f does not decrease there";
        return r;
    }
    r.holds = true;
    const auto& X = p.space();
    if (static_cast<std::size_t>(popcount(Y)) <= exhaustive_cap) {
        r.exhaustive = true;
        const auto pts = points_of(Y);
        for (std::uint64_t m = 1; m < (std::uint64_t{1} << pts.size()); ++m) {
            PointSet A = 0;
            double gap = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < pts.size(); ++i)
                if (m >> i & 1u) {
                    A |= bit(pts[i]);
                    gap = std::min(gap, p.f(pts[i]) - p.f(p.map()(pts[i])));
                }
            if (gap <= 0 && !(X.closure(A) & p.fixed())) {
                r.holds = false;
                r.witness = A;
                break;
            }
        }
    }
    r.analysis = r.holds ? "Lyapunov on a finite space: every decrement infimum is attained at a fixed point"
                         : "subset " + X.format(*r.witness) + " has vanishing decrement but no fixed point in its closure";
    return r;
}

inline std::string Bound::str() const {
    if (infinite) return "inf";
    std::string s = std::to_string(value);
    s.erase(s.find_last_not_of('0') + 1);
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
}

}  // namespace lslab
