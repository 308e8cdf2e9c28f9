#include "slexp/problems.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <sstream>

#include "slexp/interp.hpp"

namespace slexp {

namespace {

constexpr double two_pi = 6.283185307179586476925286766559;

// cache of per-node / per-mode operator tables, keyed by (op, k, scale bits)
template <typename T>
class OpTableCache {
public:
    using Table = std::vector<T>;
    std::shared_ptr<const Table> get(int op, int k, double scale, const std::function<Table()>& make) const {
        const Key key{op, k, std::bit_cast<std::uint64_t>(scale)};
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto it = map_.find(key);
            if (it != map_.end()) return it->second;
        }
        auto table = std::make_shared<const Table>(make());
        std::lock_guard<std::mutex> lock(mu_);
        auto [it, inserted] = map_.emplace(key, table);
        return it->second;
    }

private:
    using Key = std::tuple<int, int, std::uint64_t>;
    mutable std::mutex mu_;
    mutable std::map<Key, std::shared_ptr<const Table>> map_;
};

enum { op_phi = 0, op_psi = 1, op_solve = 2 };

} // namespace

const PeriodicGrid1D& Problem::grid1d() const { throw InvalidInputError("problem has no 1D grid"); }
const Grid2D& Problem::grid2d() const { throw InvalidInputError("problem has no 2D grid"); }
State Problem::analytic_state(double) const { throw InvalidInputError("no analytic solution available"); }

// ---- scalar 1D ---------------------------------------------------------------

namespace {

class ScalarProblem final : public Problem {
public:
    explicit ScalarProblem(ScalarProblemConfig cfg)
        : cfg_(std::move(cfg)), grid_(cfg_.domain_length, cfg_.points) {
        const int n = grid_.points;
        reaction_.resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            reaction_[static_cast<std::size_t>(i)] = cfg_.reaction(grid_.node(i));
            if (!std::isfinite(reaction_[static_cast<std::size_t>(i)]))
                throw InvalidInputError("scalar problem: non-finite reaction coefficient");
        }
    }

    std::string name() const override { return cfg_.label; }
    int components() const override { return 1; }
    bool two_dimensional() const override { return false; }
    const PeriodicGrid1D& grid1d() const override { return grid_; }

    State initial_state() const override {
        std::vector<double> u(static_cast<std::size_t>(grid_.points));
        for (int i = 0; i < grid_.points; ++i) u[static_cast<std::size_t>(i)] = cfg_.initial(grid_.node(i));
        State s;
        s.comps.push_back(forward_transform(u, grid_));
        return s;
    }

    bool has_nonlinear() const override { return static_cast<bool>(cfg_.nonlinear_reaction); }

    State apply_phi(int k, double scale, const State& u) const override {
        auto tab = factors_.get(op_phi, k, scale, [&] { return make_factors(&eval_phi, k, scale); });
        return apply_pointwise(*tab, u);
    }
    State apply_psi(int k, double scale, const State& u) const override {
        auto tab = factors_.get(op_psi, k, scale, [&] { return make_factors(&eval_psi, k, scale); });
        return apply_pointwise(*tab, u);
    }

    State apply_linear(const State& u) const override { return apply_pointwise(reaction_, u); }

    State solve_semi_implicit(double alpha, const State& u) const override {
        auto tab = factors_.get(op_solve, 0, alpha, [&] {
            std::vector<double> t(reaction_.size());
            for (std::size_t i = 0; i < reaction_.size(); ++i) {
                const double d = 1.0 - alpha * reaction_[i];
                if (d == 0.0) throw SingularConfigError("scalar semi-implicit solve: singular factor");
                t[i] = 1.0 / d;
            }
            return t;
        });
        return apply_pointwise(*tab, u);
    }

    State eval_nonlinear(double, const State& u) const override {
        State r = state_like(u);
        if (!has_nonlinear()) return r;
        auto g = inverse_transform_complex(u.comps[0], grid_);
        std::vector<Complex> out(g.size());
        for (int i = 0; i < grid_.points; ++i)
            out[static_cast<std::size_t>(i)] =
                cfg_.nonlinear_reaction(g[static_cast<std::size_t>(i)].real(), grid_.node(i));
        r.comps[0] = forward_transform(out, grid_);
        return r;
    }

    State eval_rhs_eulerian(double t, const State& u) const override { return eulerian(t, u, true); }
    State eval_nonlinear_eulerian(double t, const State& u) const override { return eulerian(t, u, false); }

    Velocity velocity(double t, const State&) const override {
        Velocity v;
        v.vx.resize(static_cast<std::size_t>(grid_.points));
        for (int i = 0; i < grid_.points; ++i) v.vx[static_cast<std::size_t>(i)] = cfg_.velocity(t, grid_.node(i));
        return v;
    }

    TrajectorySet departure_points(const Velocity& now, const Velocity& prev, double dt,
                                   const SettlsOptions& opts) const override {
        return compute_departure_points(VelocityHistory{now.vx, prev.vx}, grid_, dt, opts);
    }

    State interpolate_to(const TrajectorySet& traj, const State& u) const override {
        State r = state_like(u);
        for (std::size_t c = 0; c < u.comps.size(); ++c) {
            auto g = inverse_transform_complex(u.comps[c], grid_);
            auto vals = interp_cubic(g, grid_, traj.x_dep);
            r.comps[c] = forward_transform(vals, grid_);
        }
        return r;
    }

    State hyperviscosity(const State& u, double dt, int q, double nu) const override {
        return hyperviscosity_1d(u, grid_, dt, q, nu);
    }

    std::vector<double> grid_values(const State& u) const override {
        std::vector<double> out;
        for (const auto& c : u.comps) {
            auto g = inverse_transform(c, grid_);
            out.insert(out.end(), g.begin(), g.end());
        }
        return out;
    }

    bool has_analytic_solution() const override { return cfg_.constant_coefficients; }

    State analytic_state(double t) const override {
        if (!cfg_.constant_coefficients) return Problem::analytic_state(t);
        const double growth = std::exp(cfg_.const_reaction * t);
        std::vector<double> u(static_cast<std::size_t>(grid_.points));
        for (int i = 0; i < grid_.points; ++i)
            u[static_cast<std::size_t>(i)] =
                growth * cfg_.initial(grid_.wrap(grid_.node(i) - cfg_.const_velocity * t));
        State s;
        s.comps.push_back(forward_transform(u, grid_));
        return s;
    }

    static State hyperviscosity_1d(const State& u, const PeriodicGrid1D& grid, double dt, int q, double nu) {
        if (nu == 0.0) return u;
        State r = u;
        const int n = grid.points;
        for (auto& comp : r.comps)
            for (int k = 0; k < n; ++k) {
                const double kappa = two_pi * std::abs(signed_index(k, n)) / grid.length;
                comp.c[static_cast<std::size_t>(k)] /= 1.0 + dt * nu * std::pow(kappa, q);
            }
        return r;
    }

private:
    std::vector<double> make_factors(Complex (*fn)(int, Complex), int k, double scale) const {
        std::vector<double> t(reaction_.size());
        for (std::size_t i = 0; i < reaction_.size(); ++i) t[i] = fn(k, Complex(scale * reaction_[i])).real();
        return t;
    }

    State apply_pointwise(const std::vector<double>& fac, const State& u) const {
        if (u.comps.size() != 1 || static_cast<int>(u.comps[0].size()) != grid_.points)
            throw DimensionError("scalar problem: state size mismatch");
        auto g = inverse_transform_complex(u.comps[0], grid_);
        for (std::size_t i = 0; i < g.size(); ++i) g[i] *= fac[i];
        State r;
        r.comps.push_back(forward_transform(g, grid_));
        return r;
    }

    State eulerian(double t, const State& u, bool with_linear) const {
        auto g = inverse_transform_complex(u.comps[0], grid_);
        auto gx = inverse_transform_complex(spectral_derivative(u.comps[0], grid_, 1), grid_);
        std::vector<Complex> rhs(g.size());
        for (int i = 0; i < grid_.points; ++i) {
            const auto ix = static_cast<std::size_t>(i);
            const double x = grid_.node(i);
            Complex val = -cfg_.velocity(t, x) * gx[ix];
            if (cfg_.nonlinear_reaction) val += cfg_.nonlinear_reaction(g[ix].real(), x);
            if (with_linear) val += reaction_[ix] * g[ix];
            rhs[ix] = val;
        }
        State r;
        r.comps.push_back(forward_transform(rhs, grid_));
        return r;
    }

    ScalarProblemConfig cfg_;
    PeriodicGrid1D grid_;
    std::vector<double> reaction_;
    OpTableCache<double> factors_;
};

// ---- vector 1D (2 components) -------------------------------------------------

using Mat2 = std::array<double, 4>; // row-major 2x2

class VectorProblem final : public Problem {
public:
    explicit VectorProblem(VectorProblemConfig cfg)
        : cfg_(std::move(cfg)), grid_(cfg_.domain_length, cfg_.points) {
        const int n = grid_.points;
        node_matrices_.reserve(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            const Mat2 m = cfg_.reaction(grid_.node(i));
            CMat cm(2);
            cm.at(0, 0) = m[0];
            cm.at(0, 1) = m[1];
            cm.at(1, 0) = m[2];
            cm.at(1, 1) = m[3];
            node_matrices_.push_back(SymbolMatrix::decompose(cm));
        }
    }

    std::string name() const override { return cfg_.label; }
    int components() const override { return 2; }
    bool two_dimensional() const override { return false; }
    const PeriodicGrid1D& grid1d() const override { return grid_; }

    State initial_state() const override {
        std::vector<double> u(static_cast<std::size_t>(grid_.points));
        for (int i = 0; i < grid_.points; ++i) u[static_cast<std::size_t>(i)] = cfg_.initial(grid_.node(i));
        State s;
        s.comps.push_back(forward_transform(u, grid_));
        s.comps.push_back(s.comps[0]);
        return s;
    }

    bool has_nonlinear() const override { return false; }

    State apply_phi(int k, double scale, const State& u) const override {
        auto tab = tables_.get(op_phi, k, scale, [&] { return make_table(true, k, scale); });
        return apply_pointwise(*tab, u);
    }
    State apply_psi(int k, double scale, const State& u) const override {
        auto tab = tables_.get(op_psi, k, scale, [&] { return make_table(false, k, scale); });
        return apply_pointwise(*tab, u);
    }

    State apply_linear(const State& u) const override {
        auto tab = tables_.get(op_solve, 1, 0.0, [&] {
            std::vector<Mat2> t;
            t.reserve(node_matrices_.size());
            for (const auto& s : node_matrices_) {
                const CMat& e = s.entries();
                t.push_back(Mat2{e.at(0, 0).real(), e.at(0, 1).real(), e.at(1, 0).real(), e.at(1, 1).real()});
            }
            return t;
        });
        return apply_pointwise(*tab, u);
    }

    State solve_semi_implicit(double alpha, const State& u) const override {
        auto tab = tables_.get(op_solve, 0, alpha, [&] {
            std::vector<Mat2> t;
            t.reserve(node_matrices_.size());
            for (const auto& s : node_matrices_) {
                const CMat& e = s.entries();
                const double a = 1.0 - alpha * e.at(0, 0).real(), b = -alpha * e.at(0, 1).real();
                const double c = -alpha * e.at(1, 0).real(), d = 1.0 - alpha * e.at(1, 1).real();
                const double dd = a * d - b * c;
                if (dd == 0.0) throw SingularConfigError("vector semi-implicit solve: singular block");
                t.push_back(Mat2{d / dd, -b / dd, -c / dd, a / dd});
            }
            return t;
        });
        return apply_pointwise(*tab, u);
    }

    State eval_nonlinear(double, const State& u) const override { return state_like(u); }

    State eval_rhs_eulerian(double t, const State& u) const override { return eulerian(t, u, true); }
    State eval_nonlinear_eulerian(double t, const State& u) const override { return eulerian(t, u, false); }

    Velocity velocity(double t, const State&) const override {
        Velocity v;
        v.vx.resize(static_cast<std::size_t>(grid_.points));
        for (int i = 0; i < grid_.points; ++i) v.vx[static_cast<std::size_t>(i)] = cfg_.velocity(t, grid_.node(i));
        return v;
    }

    TrajectorySet departure_points(const Velocity& now, const Velocity& prev, double dt,
                                   const SettlsOptions& opts) const override {
        return compute_departure_points(VelocityHistory{now.vx, prev.vx}, grid_, dt, opts);
    }

    State interpolate_to(const TrajectorySet& traj, const State& u) const override {
        State r = state_like(u);
        for (std::size_t c = 0; c < u.comps.size(); ++c) {
            auto g = inverse_transform_complex(u.comps[c], grid_);
            auto vals = interp_cubic(g, grid_, traj.x_dep);
            r.comps[c] = forward_transform(vals, grid_);
        }
        return r;
    }

    State hyperviscosity(const State& u, double dt, int q, double nu) const override {
        return ScalarProblem::hyperviscosity_1d(u, grid_, dt, q, nu);
    }

    std::vector<double> grid_values(const State& u) const override {
        std::vector<double> out;
        for (const auto& c : u.comps) {
            auto g = inverse_transform(c, grid_);
            out.insert(out.end(), g.begin(), g.end());
        }
        return out;
    }

private:
    std::vector<Mat2> make_table(bool phi, int k, double scale) const {
        std::vector<Mat2> t;
        t.reserve(node_matrices_.size());
        for (const auto& s : node_matrices_) {
            const CMat m = phi ? phi_of_matrix(k, s, scale) : psi_of_matrix(k, s, scale);
            t.push_back(Mat2{m.at(0, 0).real(), m.at(0, 1).real(), m.at(1, 0).real(), m.at(1, 1).real()});
        }
        return t;
    }

    State apply_pointwise(const std::vector<Mat2>& tab, const State& u) const {
        if (u.comps.size() != 2) throw DimensionError("vector problem: expected 2 components");
        auto g0 = inverse_transform_complex(u.comps[0], grid_);
        auto g1 = inverse_transform_complex(u.comps[1], grid_);
        for (std::size_t i = 0; i < g0.size(); ++i) {
            const Mat2& m = tab[i];
            const Complex a = g0[i], b = g1[i];
            g0[i] = m[0] * a + m[1] * b;
            g1[i] = m[2] * a + m[3] * b;
        }
        State r;
        r.comps.push_back(forward_transform(g0, grid_));
        r.comps.push_back(forward_transform(g1, grid_));
        return r;
    }

    State eulerian(double t, const State& u, bool with_linear) const {
        auto g0 = inverse_transform_complex(u.comps[0], grid_);
        auto g1 = inverse_transform_complex(u.comps[1], grid_);
        auto gx0 = inverse_transform_complex(spectral_derivative(u.comps[0], grid_, 1), grid_);
        auto gx1 = inverse_transform_complex(spectral_derivative(u.comps[1], grid_, 1), grid_);
        std::vector<Complex> r0(g0.size()), r1(g1.size());
        for (int i = 0; i < grid_.points; ++i) {
            const auto ix = static_cast<std::size_t>(i);
            const double v = cfg_.velocity(t, grid_.node(i));
            r0[ix] = -v * gx0[ix];
            r1[ix] = -v * gx1[ix];
            if (with_linear) {
                const CMat& e = node_matrices_[ix].entries();
                r0[ix] += e.at(0, 0).real() * g0[ix] + e.at(0, 1).real() * g1[ix];
                r1[ix] += e.at(1, 0).real() * g0[ix] + e.at(1, 1).real() * g1[ix];
            }
        }
        State r;
        r.comps.push_back(forward_transform(r0, grid_));
        r.comps.push_back(forward_transform(r1, grid_));
        return r;
    }

    VectorProblemConfig cfg_;
    PeriodicGrid1D grid_;
    std::vector<SymbolMatrix> node_matrices_;
    OpTableCache<Mat2> tables_;
};

} // namespace

std::unique_ptr<Problem> make_scalar_problem(ScalarProblemConfig cfg) {
    return std::make_unique<ScalarProblem>(std::move(cfg));
}

std::unique_ptr<Problem> make_vector_problem(VectorProblemConfig cfg) {
    return std::make_unique<VectorProblem>(std::move(cfg));
}

// ---- SWE on the biperiodic plane ----------------------------------------------

CMat swe_plane_symbol(double kx, double ky, double mean_geopotential, double coriolis) {
    CMat m(3);
    const Complex ikx(0.0, kx), iky(0.0, ky);
    m.at(0, 1) = -mean_geopotential * ikx;
    m.at(0, 2) = -mean_geopotential * iky;
    m.at(1, 0) = -ikx;
    m.at(1, 2) = coriolis;
    m.at(2, 0) = -iky;
    m.at(2, 1) = -coriolis;
    return m;
}

SymbolMatrix linear_symbol(double kx, double ky, double mean_geopotential, double coriolis) {
    return SymbolMatrix::decompose(swe_plane_symbol(kx, ky, mean_geopotential, coriolis));
}

namespace detail {

void apply_mode_table(const std::vector<CMat>& table, const State& u, State& out, bool parallel) {
    const long n = static_cast<long>(table.size());
    const auto body = [&](long i) {
        const auto ix = static_cast<std::size_t>(i);
        const CMat& m = table[ix];
        const Complex a = u.comps[0].c[ix], b = u.comps[1].c[ix], c = u.comps[2].c[ix];
        out.comps[0].c[ix] = m.at(0, 0) * a + m.at(0, 1) * b + m.at(0, 2) * c;
        out.comps[1].c[ix] = m.at(1, 0) * a + m.at(1, 1) * b + m.at(1, 2) * c;
        out.comps[2].c[ix] = m.at(2, 0) * a + m.at(2, 1) * b + m.at(2, 2) * c;
    };
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (long i = 0; i < n; ++i) body(i);
    } else {
        for (long i = 0; i < n; ++i) body(i);
    }
}

} // namespace detail

namespace {

class SwePlaneProblem final : public Problem {
public:
    explicit SwePlaneProblem(SwePlaneConfig cfg)
        : cfg_(std::move(cfg)),
          grid_(PeriodicGrid1D(cfg_.lx, cfg_.points_x), PeriodicGrid1D(cfg_.ly, cfg_.points_y)) {
        if (!(cfg_.mean_geopotential > 0.0))
            throw InvalidInputError("swe plane: mean geopotential must be positive");
        const int px = grid_.x.points, py = grid_.y.points;
        const double f_linear = cfg_.coriolis_in_nonlinear ? 0.0 : cfg_.coriolis;
        symbols_.reserve(grid_.size());
        for (int iy = 0; iy < py; ++iy)
            for (int ix = 0; ix < px; ++ix) {
                // Nyquist slots carry no usable first-derivative sign; their
                // symbol keeps only the rotation part (matches the derivative
                // convention and the 2/3-rule truncation anyway)
                const double kx = (ix == px / 2) ? 0.0 : two_pi * signed_index(ix, px) / grid_.x.length;
                const double ky = (iy == py / 2) ? 0.0 : two_pi * signed_index(iy, py) / grid_.y.length;
                symbols_.push_back(linear_symbol(kx, ky, cfg_.mean_geopotential, f_linear));
            }
    }

    std::string name() const override { return cfg_.label; }
    int components() const override { return 3; }
    bool two_dimensional() const override { return true; }
    const Grid2D& grid2d() const override { return grid_; }

    State initial_state() const override {
        const int px = grid_.x.points, py = grid_.y.points;
        std::vector<double> phi(grid_.size()), u(grid_.size()), v(grid_.size(), 0.0);
        const double f = cfg_.coriolis;
        if (cfg_.balance_amplitude != 0.0 && f == 0.0)
            throw InvalidInputError("swe plane: balanced state needs nonzero coriolis");
        const double ky0 = two_pi / grid_.y.length;
        for (int iy = 0; iy < py; ++iy)
            for (int ix = 0; ix < px; ++ix) {
                const double x = grid_.x.node(ix), y = grid_.y.node(iy);
                double p = cfg_.balance_amplitude * std::cos(ky0 * y);
                // u = -(1/f) dPhi'/dy keeps f u = -dPhi'/dy
                double uu = (f != 0.0) ? cfg_.balance_amplitude * ky0 / f * std::sin(ky0 * y) : 0.0;
                if (cfg_.bump_amplitude != 0.0) {
                    const double dx = x - 0.5 * grid_.x.length, dy = y - 0.5 * grid_.y.length;
                    p += cfg_.bump_amplitude * std::exp(-(dx * dx + dy * dy) / cfg_.bump_sigma2);
                }
                phi[grid_.index(ix, iy)] = p;
                u[grid_.index(ix, iy)] = uu;
            }
        State s;
        s.comps.push_back(forward_transform2d(phi, grid_));
        s.comps.push_back(forward_transform2d(u, grid_));
        s.comps.push_back(forward_transform2d(v, grid_));
        return s;
    }

    bool has_nonlinear() const override { return true; }

    State apply_phi(int k, double scale, const State& u) const override {
        auto tab = tables_.get(op_phi, k, scale, [&] { return make_table(true, k, scale); });
        return apply_table(*tab, u);
    }
    State apply_psi(int k, double scale, const State& u) const override {
        auto tab = tables_.get(op_psi, k, scale, [&] { return make_table(false, k, scale); });
        return apply_table(*tab, u);
    }

    State apply_linear(const State& u) const override {
        auto tab = tables_.get(op_solve, 1, 0.0, [&] {
            std::vector<CMat> t;
            t.reserve(symbols_.size());
            for (const auto& s : symbols_) t.push_back(s.entries());
            return t;
        });
        return apply_table(*tab, u);
    }

    State solve_semi_implicit(double alpha, const State& u) const override {
        auto tab = tables_.get(op_solve, 0, alpha, [&] {
            std::vector<CMat> t;
            t.reserve(symbols_.size());
            for (const auto& s : symbols_) {
                CMat m = CMat::identity(3) - (Complex(alpha) * s.entries());
                t.push_back(inverse(m));
            }
            return t;
        });
        return apply_table(*tab, u);
    }

    State eval_nonlinear(double, const State& u) const override {
        // N~ = (-Phi' delta, 0, 0), plus optional Coriolis when excluded from L
        State r = state_like(u);
        SpectralField delta = spectral_derivative2d(u.comps[1], grid_, 0, 1);
        const SpectralField vy = spectral_derivative2d(u.comps[2], grid_, 1, 1);
        for (std::size_t i = 0; i < delta.size(); ++i) delta.c[i] += vy.c[i];
        SpectralField phi = u.comps[0];
        dealias2d(delta, grid_);
        dealias2d(phi, grid_);
        auto dg = inverse_transform2d_complex(delta, grid_);
        auto pg = inverse_transform2d_complex(phi, grid_);
        std::vector<Complex> prod(dg.size());
        for (std::size_t i = 0; i < dg.size(); ++i) prod[i] = -pg[i] * dg[i];
        r.comps[0] = forward_transform2d(prod, grid_);
        dealias2d(r.comps[0], grid_);
        if (cfg_.coriolis_in_nonlinear && cfg_.coriolis != 0.0) {
            for (std::size_t i = 0; i < u.comps[1].size(); ++i) {
                r.comps[1].c[i] += cfg_.coriolis * u.comps[2].c[i];
                r.comps[2].c[i] -= cfg_.coriolis * u.comps[1].c[i];
            }
        }
        return r;
    }

    State eval_rhs_eulerian(double t, const State& u) const override {
        State r = eval_nonlinear_eulerian(t, u);
        State lin = apply_linear(u);
        return state_add(r, lin);
    }

    State eval_nonlinear_eulerian(double t, const State& u) const override {
        // N~(u) - (V . grad) each component
        State r = eval_nonlinear(t, u);
        auto ug = inverse_transform2d(u.comps[1], grid_);
        auto vg = inverse_transform2d(u.comps[2], grid_);
        for (int c = 0; c < 3; ++c) {
            SpectralField ddx = spectral_derivative2d(u.comps[static_cast<std::size_t>(c)], grid_, 0, 1);
            SpectralField ddy = spectral_derivative2d(u.comps[static_cast<std::size_t>(c)], grid_, 1, 1);
            dealias2d(ddx, grid_);
            dealias2d(ddy, grid_);
            auto gx = inverse_transform2d_complex(ddx, grid_);
            auto gy = inverse_transform2d_complex(ddy, grid_);
            std::vector<Complex> adv(gx.size());
            for (std::size_t i = 0; i < gx.size(); ++i) adv[i] = -(ug[i] * gx[i] + vg[i] * gy[i]);
            SpectralField advs = forward_transform2d(adv, grid_);
            dealias2d(advs, grid_);
            for (std::size_t i = 0; i < advs.size(); ++i) r.comps[static_cast<std::size_t>(c)].c[i] += advs.c[i];
        }
        return r;
    }

    Velocity velocity(double, const State& u) const override {
        Velocity v;
        v.vx = inverse_transform2d(u.comps[1], grid_);
        v.vy = inverse_transform2d(u.comps[2], grid_);
        return v;
    }

    TrajectorySet departure_points(const Velocity& now, const Velocity& prev, double dt,
                                   const SettlsOptions& opts) const override {
        VelocityHistory2D hist{now.vx, now.vy, prev.vx, prev.vy};
        return compute_departure_points2d(hist, grid_, dt, opts);
    }

    State interpolate_to(const TrajectorySet& traj, const State& u) const override {
        State r = state_like(u);
        for (std::size_t c = 0; c < u.comps.size(); ++c) {
            auto g = inverse_transform2d_complex(u.comps[c], grid_);
            auto vals = interp_bicubic(g, grid_, traj.x_dep, traj.y_dep);
            r.comps[c] = forward_transform2d(vals, grid_);
        }
        return r;
    }

    State hyperviscosity(const State& u, double dt, int q, double nu) const override {
        if (nu == 0.0) return u;
        State r = u;
        const int px = grid_.x.points, py = grid_.y.points;
        for (auto& comp : r.comps)
            for (int iy = 0; iy < py; ++iy)
                for (int ix = 0; ix < px; ++ix) {
                    const double kx = two_pi * signed_index(ix, px) / grid_.x.length;
                    const double ky = two_pi * signed_index(iy, py) / grid_.y.length;
                    const double k2 = kx * kx + ky * ky;
                    comp.c[grid_.index(ix, iy)] /= 1.0 + dt * nu * std::pow(k2, q / 2);
                }
        return r;
    }

    std::vector<double> grid_values(const State& u) const override {
        std::vector<double> out;
        for (const auto& c : u.comps) {
            auto g = inverse_transform2d(c, grid_);
            out.insert(out.end(), g.begin(), g.end());
        }
        return out;
    }

private:
    std::vector<CMat> make_table(bool phi, int k, double scale) const {
        std::vector<CMat> t(symbols_.size());
        const long n = static_cast<long>(symbols_.size());
#pragma omp parallel for schedule(static)
        for (long i = 0; i < n; ++i)
            t[static_cast<std::size_t>(i)] = phi ? phi_of_matrix(k, symbols_[static_cast<std::size_t>(i)], scale)
                                                 : psi_of_matrix(k, symbols_[static_cast<std::size_t>(i)], scale);
        return t;
    }

    State apply_table(const std::vector<CMat>& tab, const State& u) const {
        if (u.comps.size() != 3 || u.comps[0].size() != grid_.size())
            throw DimensionError("swe plane: state size mismatch");
        State r = state_like(u);
        detail::apply_mode_table(tab, u, r, true);
        return r;
    }

    SwePlaneConfig cfg_;
    Grid2D grid_;
    std::vector<SymbolMatrix> symbols_;
    OpTableCache<CMat> tables_;
};

} // namespace

std::unique_ptr<Problem> make_swe_plane_problem(SwePlaneConfig cfg) {
    return std::make_unique<SwePlaneProblem>(std::move(cfg));
}

double swe_quadratic_energy(const State& u, double mean_geopotential) {
    double e = 0.0;
    for (const auto& z : u.comps[0].c) e += std::norm(z);
    for (const auto& z : u.comps[1].c) e += mean_geopotential * std::norm(z);
    for (const auto& z : u.comps[2].c) e += mean_geopotential * std::norm(z);
    return 0.5 * e;
}

// ---- registry ------------------------------------------------------------------

namespace {

double gaussian_bump(double x) {
    const double d = x - 5.0;
    return std::exp(-d * d / 0.5);
}

// constant advecting velocity: 5/32 gives whole-node displacements for the
// dt in {2^-5, ..., 1} family on the P = 2048, L = 10 grid
constexpr double default_velocity = 5.0 / 32.0;

} // namespace

std::vector<std::string> problem_names() {
    return {"scalar-constL", "scalar-sinL",        "vector-L1",
            "vector-L2",     "swe-plane-balanced", "swe-plane-perturbed"};
}

std::unique_ptr<Problem> make_problem(const std::string& name, int resolution) {
    if (name == "scalar-constL" || name == "scalar-sinL") {
        ScalarProblemConfig cfg;
        cfg.points = resolution > 0 ? resolution : 2048;
        cfg.velocity = [](double, double) { return default_velocity; };
        cfg.initial = gaussian_bump;
        cfg.label = name;
        if (name == "scalar-constL") {
            cfg.reaction = [](double) { return 1.0; };
            cfg.constant_coefficients = true;
            cfg.const_reaction = 1.0;
            cfg.const_velocity = default_velocity;
        } else {
            cfg.reaction = [](double x) { return std::sin(x); };
        }
        return make_scalar_problem(std::move(cfg));
    }
    if (name == "vector-L1" || name == "vector-L2") {
        VectorProblemConfig cfg;
        cfg.points = resolution > 0 ? resolution : 2048;
        cfg.velocity = [](double, double) { return default_velocity; };
        cfg.initial = gaussian_bump;
        cfg.label = name;
        if (name == "vector-L1") {
            cfg.reaction = [](double x) {
                return std::array<double, 4>{std::sin(x), std::cos(x), std::cos(x), std::sin(x)};
            };
        } else {
            cfg.reaction = [](double x) {
                return std::array<double, 4>{std::sin(x), std::sin(x), std::sin(x), std::cos(x)};
            };
        }
        return make_vector_problem(std::move(cfg));
    }
    if (name == "swe-plane-balanced" || name == "swe-plane-perturbed") {
        SwePlaneConfig cfg;
        if (resolution > 0) {
            cfg.points_x = resolution;
            cfg.points_y = resolution;
        }
        cfg.label = name;
        if (name == "swe-plane-perturbed") {
            cfg.bump_amplitude = 0.5;
            cfg.bump_sigma2 = 1.0;
        }
        return make_swe_plane_problem(std::move(cfg));
    }
    std::ostringstream msg;
    msg << "unknown problem '" << name << "'; candidates:";
    for (const auto& n : problem_names()) msg << ' ' << n;
    throw UsageError(msg.str());
}

} // namespace slexp
