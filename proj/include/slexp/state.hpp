#pragma once

#include <cmath>
#include <vector>

#include "slexp/errors.hpp"
#include "slexp/spectral.hpp"

namespace slexp {

// Prognostic state: spectral coefficients per component. All components share
// the same truncation; the owning Problem knows the grid geometry.
struct State {
    std::vector<SpectralField> comps;

    std::size_t total_size() const {
        std::size_t s = 0;
        for (const auto& c : comps) s += c.size();
        return s;
    }
};

// Grid-space velocity sample (vy empty for 1D problems).
struct Velocity {
    std::vector<double> vx;
    std::vector<double> vy;
};

inline State state_like(const State& s) {
    State r;
    r.comps.resize(s.comps.size());
    for (std::size_t i = 0; i < s.comps.size(); ++i) r.comps[i].c.assign(s.comps[i].size(), Complex(0.0));
    return r;
}

inline State state_axpy(double a, const State& x, const State& y) {
    State r = y;
    for (std::size_t i = 0; i < x.comps.size(); ++i)
        for (std::size_t j = 0; j < x.comps[i].size(); ++j) r.comps[i].c[j] += a * x.comps[i].c[j];
    return r;
}

inline State state_add(const State& x, const State& y) { return state_axpy(1.0, x, y); }

inline State state_sub(const State& x, const State& y) {
    State r = x;
    for (std::size_t i = 0; i < x.comps.size(); ++i)
        for (std::size_t j = 0; j < x.comps[i].size(); ++j) r.comps[i].c[j] -= y.comps[i].c[j];
    return r;
}

inline State state_scaled(double a, const State& x) {
    State r = x;
    for (auto& c : r.comps)
        for (auto& z : c.c) z *= a;
    return r;
}

// discrete L2 norm over all spectral coefficients
inline double state_l2(const State& x) {
    double s = 0.0;
    for (const auto& c : x.comps)
        for (const auto& z : c.c) s += std::norm(z);
    return std::sqrt(s);
}

inline double state_max_abs(const State& x) {
    double m = 0.0;
    for (const auto& c : x.comps)
        for (const auto& z : c.c) m = std::max(m, std::abs(z));
    return m;
}

inline bool state_finite(const State& x) {
    for (const auto& c : x.comps)
        for (const auto& z : c.c)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

} // namespace slexp
