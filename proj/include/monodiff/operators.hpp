#pragma once

#include "monodiff/core.hpp"
#include "monodiff/counterexample.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace monodiff {

/// Points closer than this to a kink of a piecewise built-in are treated as
/// the kink itself and report extreme selections. Overridable per constructor.
inline constexpr double kDefaultKinkTolerance = 1e-9;

namespace detail {

inline constexpr std::size_t kMaxSelectionCombos = 256;

/// Componentwise canonical slopes plus the alternate slope at each kink
/// coordinate.
struct ComponentwiseSlopes {
    Vector slopes;
    std::vector<std::pair<Index, double>> alternates;
};

/// All slope assignments over the kink coordinates, canonical (all-first)
/// assignment first, capped at kMaxSelectionCombos.
inline std::vector<Vector> enumerate_slope_combos(const ComponentwiseSlopes& cs) {
    const std::size_t k = cs.alternates.size();
    const std::size_t total =
        k >= 8 ? kMaxSelectionCombos : (std::size_t{1} << k);
    std::vector<Vector> combos;
    combos.reserve(total);
    for (std::size_t mask = 0; mask < total; ++mask) {
        Vector s = cs.slopes;
        for (std::size_t j = 0; j < k && j < 8; ++j)
            if (mask & (std::size_t{1} << j)) s[cs.alternates[j].first] = cs.alternates[j].second;
        combos.push_back(std::move(s));
    }
    return combos;
}

/// Jacobian of a separable map with diagonal point-block and zero θ-block.
inline OperatorJacobian diagonal_jacobian(Index p, const ComponentwiseSlopes& cs) {
    const Index n = cs.slopes.size();
    OperatorJacobian out;
    out.canonical = {Matrix::Zero(n, p), Matrix(cs.slopes.asDiagonal())};
    if (!cs.alternates.empty()) {
        for (const auto& s : enumerate_slope_combos(cs))
            out.extremes.push_back({Matrix::Zero(n, p), Matrix(s.asDiagonal())});
    }
    return out;
}

inline void eigen_range(const Matrix& sym, double& lambda_min, double& lambda_max) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
    lambda_min = es.eigenvalues().minCoeff();
    lambda_max = es.eigenvalues().maxCoeff();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Soft threshold (prox of level·‖·‖₁)
// ---------------------------------------------------------------------------

inline Vector soft_threshold(const Vector& v, double level) {
    Vector out(v.size());
    for (Index i = 0; i < v.size(); ++i) {
        const double a = std::abs(v[i]) - level;
        out[i] = a > 0.0 ? (v[i] > 0.0 ? a : -a) : 0.0;
    }
    return out;
}

/// Slope 1 where |v_i| > level, 0 where |v_i| < level; at the kink the
/// canonical slope is 0 (the flat side) with extreme set {0, 1}.
inline detail::ComponentwiseSlopes soft_threshold_slopes(const Vector& v, double level,
                                                         double kink_tol = kDefaultKinkTolerance) {
    detail::ComponentwiseSlopes cs;
    cs.slopes.resize(v.size());
    for (Index i = 0; i < v.size(); ++i) {
        const double a = std::abs(v[i]) - level;
        if (a > kink_tol) {
            cs.slopes[i] = 1.0;
        } else if (a < -kink_tol) {
            cs.slopes[i] = 0.0;
        } else {
            cs.slopes[i] = 0.0;
            cs.alternates.emplace_back(i, 1.0);
        }
    }
    return cs;
}

inline OperatorJacobian soft_threshold_jacobian(const Vector& v, double level,
                                                double kink_tol = kDefaultKinkTolerance) {
    return detail::diagonal_jacobian(0, soft_threshold_slopes(v, level, kink_tol));
}

// ---------------------------------------------------------------------------
// Componentwise clamp / ball projections
// ---------------------------------------------------------------------------

inline Vector clamp_box(const Vector& z, double lo, double hi) {
    return z.cwiseMax(lo).cwiseMin(hi);
}

inline detail::ComponentwiseSlopes clamp_slopes(const Vector& z, double lo, double hi,
                                                double kink_tol = kDefaultKinkTolerance) {
    detail::ComponentwiseSlopes cs;
    cs.slopes.resize(z.size());
    for (Index i = 0; i < z.size(); ++i) {
        const double d = std::min(z[i] - lo, hi - z[i]);  // signed distance to the boundary
        if (d > kink_tol) {
            cs.slopes[i] = 1.0;
        } else if (d < -kink_tol) {
            cs.slopes[i] = 0.0;
        } else {
            cs.slopes[i] = 0.0;
            cs.alternates.emplace_back(i, 1.0);
        }
    }
    return cs;
}

/// Projection onto the unit ℓ∞ ball, componentwise sign(z)·min(1,|z|).
inline Vector project_linf_ball(const Vector& z) { return clamp_box(z, -1.0, 1.0); }

inline OperatorJacobian project_linf_ball_jacobian(const Vector& z,
                                                   double kink_tol = kDefaultKinkTolerance) {
    return detail::diagonal_jacobian(0, clamp_slopes(z, -1.0, 1.0, kink_tol));
}

// ---------------------------------------------------------------------------
// Quadratic resolvent
// ---------------------------------------------------------------------------

/// Resolvent of the affine monotone map x ↦ Qx + b:  (I+γQ)⁻¹(u − γb).
inline Vector quadratic_resolvent(const Matrix& Q, const Vector& b, StepSize gamma,
                                  const Vector& u) {
    const Index n = u.size();
    const Matrix M = Matrix::Identity(n, n) + gamma.gamma * Q;
    Eigen::LDLT<Matrix> ldlt(M);
    if (ldlt.info() != Eigen::Success)
        throw SingularSystem("quadratic_resolvent: I + gamma*Q is not invertible");
    return ldlt.solve(u - gamma.gamma * b);
}

// ---------------------------------------------------------------------------
// Moreau conjugate prox
// ---------------------------------------------------------------------------

/// prox_{γg*}(y) = y − γ·prox_{γ⁻¹g}(y/γ) via the Moreau decomposition.
inline Vector moreau_conjugate_prox(const ResolventHandle& prox_g, const Vector& theta,
                                    StepSize gamma, const Vector& y) {
    const double g = gamma.gamma;
    return y - g * prox_g.eval(theta, y / g, 1.0 / g);
}

/// Full handle for prox_{γg_θ*} given a handle for prox_{sg_θ} at any scale.
/// Jacobian by the chain rule: [−γ·U_g, I − V_g] at (θ, y/γ, γ⁻¹).
inline ResolventHandle make_conjugate_prox(ResolventHandle prox_g) {
    ResolventHandle out;
    out.monotonicity_modulus = 0.0;
    out.eval = [prox_g](const Vector& theta, const Vector& y, double gamma) {
        return y - gamma * prox_g.eval(theta, y / gamma, 1.0 / gamma);
    };
    out.jacobian = [prox_g](const Vector& theta, const Vector& y, double gamma) {
        const OperatorJacobian inner = prox_g.jacobian(theta, y / gamma, 1.0 / gamma);
        const Index m = y.size();
        const auto convert = [&](const JacobianSelection& s) {
            return JacobianSelection{-gamma * s.theta_block,
                                     Matrix::Identity(m, m) - s.point_block};
        };
        OperatorJacobian out_j;
        out_j.canonical = convert(inner.canonical);
        for (const auto& e : inner.extremes) out_j.extremes.push_back(convert(e));
        return out_j;
    };
    return out;
}

// ---------------------------------------------------------------------------
// Forward step
// ---------------------------------------------------------------------------

/// x − γ·B_θ(x); √(1+γ²β²)-Lipschitz in x for monotone β-Lipschitz B.
inline Vector forward_step(const OperatorHandle& B, const Vector& theta, const Vector& x,
                           StepSize gamma) {
    return x - gamma.gamma * B.eval(theta, x);
}

// ---------------------------------------------------------------------------
// Huber helpers
// ---------------------------------------------------------------------------

inline double huber_value(double t, double delta) {
    const double a = std::abs(t);
    return a <= delta ? 0.5 * t * t : delta * a - 0.5 * delta * delta;
}

inline double huber_prime(double t, double delta) {
    return t > delta ? delta : (t < -delta ? -delta : t);
}

// ---------------------------------------------------------------------------
// Resolvent constructors (A-side)
// ---------------------------------------------------------------------------

/// Resolvent of A ≡ 0 (the identity).
inline ResolventHandle make_zero_resolvent() {
    ResolventHandle h;
    h.eval = [](const Vector&, const Vector& u, double) { return u; };
    h.jacobian = [](const Vector& theta, const Vector& u, double) {
        OperatorJacobian j;
        j.canonical = {Matrix::Zero(u.size(), theta.size()),
                       Matrix::Identity(u.size(), u.size())};
        return j;
    };
    return h;
}

/// prox of λ‖·‖₁: soft threshold at level γλ.
inline ResolventHandle make_l1_prox(double lambda, double kink_tol = kDefaultKinkTolerance) {
    ResolventHandle h;
    h.eval = [lambda](const Vector&, const Vector& u, double gamma) {
        return soft_threshold(u, gamma * lambda);
    };
    h.jacobian = [lambda, kink_tol](const Vector& theta, const Vector& u, double gamma) {
        return detail::diagonal_jacobian(theta.size(),
                                         soft_threshold_slopes(u, gamma * lambda, kink_tol));
    };
    return h;
}

/// prox of λ‖· − θ‖₁ (θ-shifted lasso penalty, p = n). The θ-block is I − V.
inline ResolventHandle make_shifted_l1_prox(double lambda,
                                            double kink_tol = kDefaultKinkTolerance) {
    ResolventHandle h;
    h.eval = [lambda](const Vector& theta, const Vector& u, double gamma) {
        return theta + soft_threshold(u - theta, gamma * lambda);
    };
    h.jacobian = [lambda, kink_tol](const Vector& theta, const Vector& u, double gamma) {
        const auto cs = soft_threshold_slopes(u - theta, gamma * lambda, kink_tol);
        const Index n = u.size();
        OperatorJacobian j;
        const auto assemble = [n](const Vector& s) {
            return JacobianSelection{Matrix::Identity(n, n) - Matrix(s.asDiagonal()),
                                     Matrix(s.asDiagonal())};
        };
        j.canonical = assemble(cs.slopes);
        if (!cs.alternates.empty())
            for (const auto& s : detail::enumerate_slope_combos(cs)) j.extremes.push_back(assemble(s));
        return j;
    };
    return h;
}

/// Resolvent of the normal cone of the unit ℓ∞ ball (= projection, any γ).
inline ResolventHandle make_linf_projection(double kink_tol = kDefaultKinkTolerance) {
    ResolventHandle h;
    h.eval = [](const Vector&, const Vector& u, double) { return project_linf_ball(u); };
    h.jacobian = [kink_tol](const Vector& theta, const Vector& u, double) {
        return detail::diagonal_jacobian(theta.size(), clamp_slopes(u, -1.0, 1.0, kink_tol));
    };
    return h;
}

/// Resolvent of the normal cone of the box [lo, hi]^n.
inline ResolventHandle make_box_projection(double lo, double hi,
                                           double kink_tol = kDefaultKinkTolerance) {
    ResolventHandle h;
    h.eval = [lo, hi](const Vector&, const Vector& u, double) { return clamp_box(u, lo, hi); };
    h.jacobian = [lo, hi, kink_tol](const Vector& theta, const Vector& u, double) {
        return detail::diagonal_jacobian(theta.size(), clamp_slopes(u, lo, hi, kink_tol));
    };
    return h;
}

/// prox of λ·huber_δ: v/(1+γλ) inside |v| ≤ δ(1+γλ), v − γλδ·sign(v) outside.
inline ResolventHandle make_huber_prox(double lambda, double delta,
                                       double kink_tol = kDefaultKinkTolerance) {
    ResolventHandle h;
    h.eval = [lambda, delta](const Vector&, const Vector& u, double gamma) {
        const double s = gamma * lambda;
        Vector out(u.size());
        for (Index i = 0; i < u.size(); ++i) {
            if (std::abs(u[i]) <= delta * (1.0 + s))
                out[i] = u[i] / (1.0 + s);
            else
                out[i] = u[i] - s * delta * (u[i] > 0.0 ? 1.0 : -1.0);
        }
        return out;
    };
    h.jacobian = [lambda, delta, kink_tol](const Vector& theta, const Vector& u, double gamma) {
        const double s = gamma * lambda;
        const double inner = 1.0 / (1.0 + s);
        detail::ComponentwiseSlopes cs;
        cs.slopes.resize(u.size());
        for (Index i = 0; i < u.size(); ++i) {
            const double a = std::abs(u[i]) - delta * (1.0 + s);
            if (a < -kink_tol) {
                cs.slopes[i] = inner;
            } else if (a > kink_tol) {
                cs.slopes[i] = 1.0;
            } else {
                cs.slopes[i] = inner;  // smaller slope is canonical
                cs.alternates.emplace_back(i, 1.0);
            }
        }
        return detail::diagonal_jacobian(theta.size(), cs);
    };
    return h;
}

/// Resolvent of x ↦ Qx + b for symmetric PSD Q: (I+γQ)⁻¹(u − γb).
inline ResolventHandle make_quadratic_resolvent(Matrix Q, Vector b) {
    ResolventHandle h;
    double lmin, lmax;
    detail::eigen_range(Q, lmin, lmax);
    h.monotonicity_modulus = std::max(lmin, 0.0);
    h.eval = [Q, b](const Vector&, const Vector& u, double gamma) {
        return quadratic_resolvent(Q, b, StepSize(gamma), u);
    };
    h.jacobian = [Q](const Vector& theta, const Vector& u, double gamma) {
        const Index n = u.size();
        const Matrix M = Matrix::Identity(n, n) + gamma * Q;
        OperatorJacobian j;
        j.canonical = {Matrix::Zero(n, theta.size()), M.ldlt().solve(Matrix::Identity(n, n))};
        return j;
    };
    return h;
}

/// Resolvent of αI + A given the resolvent of A:
/// R_{γ(αI+A)}(u) = R_{γ'A}(u/(1+γα)) with γ' = γ/(1+γα).
inline ResolventHandle make_tikhonov_resolvent(double alpha, ResolventHandle inner) {
    if (!(alpha > 0.0)) throw NonPositiveModulus("make_tikhonov_resolvent: alpha must be > 0");
    ResolventHandle h;
    h.monotonicity_modulus = alpha + inner.monotonicity_modulus;
    h.eval = [alpha, inner](const Vector& theta, const Vector& u, double gamma) {
        const double c = 1.0 + gamma * alpha;
        return inner.eval(theta, u / c, gamma / c);
    };
    h.jacobian = [alpha, inner](const Vector& theta, const Vector& u, double gamma) {
        const double c = 1.0 + gamma * alpha;
        OperatorJacobian j = inner.jacobian(theta, u / c, gamma / c);
        j.canonical.point_block /= c;
        for (auto& e : j.extremes) e.point_block /= c;
        return j;
    };
    return h;
}

// ---------------------------------------------------------------------------
// Forward-operator constructors (B-side)
// ---------------------------------------------------------------------------

inline OperatorHandle make_zero_operator() {
    OperatorHandle h;
    h.lipschitz_bound = 0.0;
    h.eval = [](const Vector&, const Vector& x) { return Vector(Vector::Zero(x.size())); };
    h.jacobian = [](const Vector& theta, const Vector& x) {
        OperatorJacobian j;
        j.canonical = {Matrix::Zero(x.size(), theta.size()), Matrix::Zero(x.size(), x.size())};
        return j;
    };
    return h;
}

/// ∇ₓ ½‖x − θ‖² = x − θ (requires p = n). Joint Jacobian [−I  I].
inline OperatorHandle make_identity_minus_theta() {
    OperatorHandle h;
    h.lipschitz_bound = 1.0;
    h.monotonicity_modulus = 1.0;
    h.eval = [](const Vector& theta, const Vector& x) { return Vector(x - theta); };
    h.jacobian = [](const Vector&, const Vector& x) {
        const Index n = x.size();
        OperatorJacobian j;
        j.canonical = {Matrix(-Matrix::Identity(n, n)), Matrix::Identity(n, n)};
        return j;
    };
    return h;
}

/// ∇ₓ(½xᵀQx − θᵀx) + b = Qx − θ + b for symmetric PSD Q (requires p = n).
inline OperatorHandle make_quadratic_gradient(Matrix Q, Vector b) {
    OperatorHandle h;
    double lmin, lmax;
    detail::eigen_range(Q, lmin, lmax);
    h.monotonicity_modulus = std::max(lmin, 0.0);
    h.lipschitz_bound = std::max(std::abs(lmin), std::abs(lmax));
    h.eval = [Q, b](const Vector& theta, const Vector& x) { return Vector(Q * x - theta + b); };
    h.jacobian = [Q](const Vector&, const Vector& x) {
        const Index n = x.size();
        OperatorJacobian j;
        j.canonical = {Matrix(-Matrix::Identity(n, n)), Q};
        return j;
    };
    return h;
}

/// θ-free linear monotone map x ↦ Mx (e.g. skew couplings).
inline OperatorHandle make_linear_operator(Matrix M) {
    OperatorHandle h;
    double lmin, lmax;
    detail::eigen_range(0.5 * (M + M.transpose()), lmin, lmax);
    h.monotonicity_modulus = std::max(lmin, 0.0);
    h.lipschitz_bound = M.jacobiSvd().singularValues()(0);
    h.eval = [M](const Vector&, const Vector& x) { return Vector(M * x); };
    h.jacobian = [M](const Vector& theta, const Vector& x) {
        OperatorJacobian j;
        j.canonical = {Matrix::Zero(x.size(), theta.size()), M};
        return j;
    };
    return h;
}

// ---------------------------------------------------------------------------
// Smooth-gradient registry
// ---------------------------------------------------------------------------

/// Named analytic gradients ∇f_θ with joint Jacobians:
///   shift_quadratic          f = ½‖x−θ‖²                    (params: none, p = n)
///   quadratic_form           f = ½xᵀQx − θᵀx                (params: Q row-major, p = n)
///   huber_scale              f = huber_δ(θ·x), 1-D          (params: [delta])
inline OperatorHandle smooth_gradient_handle(const std::string& name,
                                             const std::vector<double>& params = {},
                                             double kink_tol = kDefaultKinkTolerance) {
    if (name == "shift_quadratic") return make_identity_minus_theta();
    if (name == "quadratic_form") {
        const auto n = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(params.size()))));
        if (n < 1 || static_cast<std::size_t>(n) * static_cast<std::size_t>(n) != params.size())
            throw DimensionMismatch("quadratic_form: params must hold a square matrix");
        Matrix Q(n, n);
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j) Q(i, j) = params[static_cast<std::size_t>(i * n + j)];
        return make_quadratic_gradient(Q, Vector::Zero(n));
    }
    if (name == "huber_scale") {
        if (params.size() != 1) throw DimensionMismatch("huber_scale: params must be [delta]");
        const double delta = params[0];
        OperatorHandle h;
        h.eval = [delta](const Vector& theta, const Vector& x) {
            Vector out(1);
            out[0] = theta[0] * huber_prime(theta[0] * x[0], delta);
            return out;
        };
        h.jacobian = [delta, kink_tol](const Vector& theta, const Vector& x) {
            const double t = theta[0] * x[0];
            // huber''(t) switches between 1 (|t| < δ) and 0 (|t| > δ)
            const auto assemble = [&](double second) {
                Matrix W(1, 1), Z(1, 1);
                W(0, 0) = huber_prime(t, delta) + theta[0] * x[0] * second;
                Z(0, 0) = theta[0] * theta[0] * second;
                return JacobianSelection{W, Z};
            };
            const double a = std::abs(t) - delta;
            OperatorJacobian j;
            if (a < -kink_tol) {
                j.canonical = assemble(1.0);
            } else if (a > kink_tol) {
                j.canonical = assemble(0.0);
            } else {
                j.canonical = assemble(0.0);
                j.extremes = {assemble(0.0), assemble(1.0)};
            }
            return j;
        };
        return h;
    }
    throw UnknownRegistryName("smooth_gradient_handle: unknown entry '" + name + "'");
}

// ---------------------------------------------------------------------------
// Conjugate pairs (Moreau identity fixtures)
// ---------------------------------------------------------------------------

/// A prox pair (prox_{s·g}, prox_{s·g*}) satisfying the Moreau identity
/// prox_{γg}(y) + γ·prox_{γ⁻¹g*}(y/γ) = y.
struct ConjugatePair {
    std::string name;
    std::function<Vector(const Vector&, double)> prox;       ///< prox_{s·g}
    std::function<Vector(const Vector&, double)> prox_conj;  ///< prox_{s·g*}
};

inline const std::vector<ConjugatePair>& conjugate_pairs() {
    static const std::vector<ConjugatePair> pairs = [] {
        std::vector<ConjugatePair> v;
        v.push_back({"l1",  // g = ‖·‖₁, g* = indicator of the unit ℓ∞ ball
                     [](const Vector& y, double s) { return soft_threshold(y, s); },
                     [](const Vector& y, double) { return clamp_box(y, -1.0, 1.0); }});
        v.push_back({"l1_half",  // g = 0.5‖·‖₁
                     [](const Vector& y, double s) { return soft_threshold(y, 0.5 * s); },
                     [](const Vector& y, double) { return clamp_box(y, -0.5, 0.5); }});
        v.push_back({"half_square",  // g = ½‖·‖² is self-conjugate
                     [](const Vector& y, double s) { return Vector(y / (1.0 + s)); },
                     [](const Vector& y, double s) { return Vector(y / (1.0 + s)); }});
        v.push_back({"box",  // g = indicator of [−1,1]^n, g* = ‖·‖₁
                     [](const Vector& y, double) { return clamp_box(y, -1.0, 1.0); },
                     [](const Vector& y, double s) { return soft_threshold(y, s); }});
        v.push_back({"huber",  // g = huber_δ, g* = ½y² restricted to |y| ≤ δ
                     [](const Vector& y, double s) {
                         const double delta = 0.7;
                         Vector out(y.size());
                         for (Index i = 0; i < y.size(); ++i) {
                             if (std::abs(y[i]) <= delta * (1.0 + s))
                                 out[i] = y[i] / (1.0 + s);
                             else
                                 out[i] = y[i] - s * delta * (y[i] > 0.0 ? 1.0 : -1.0);
                         }
                         return out;
                     },
                     [](const Vector& y, double s) {
                         return clamp_box(y / (1.0 + s), -0.7, 0.7);
                     }});
        return v;
    }();
    return pairs;
}

// ---------------------------------------------------------------------------
// Problem registry
// ---------------------------------------------------------------------------

struct BuiltProblem {
    ProblemSpec spec;
    double default_gamma = 0.0;
};

namespace detail {

inline double fallback_gamma(double alpha, double beta) {
    if (alpha > 0.0) return alpha / ((alpha + beta) * (alpha + beta));
    if (beta > 0.0) return 0.5 / beta;
    return 1.0;
}

inline Matrix params_as_matrix(const std::vector<double>& params, Index rows, Index cols,
                               std::size_t offset = 0) {
    if (params.size() < offset + static_cast<std::size_t>(rows * cols))
        throw DimensionMismatch("registry: expected " + std::to_string(rows * cols) +
                                " matrix entries in params");
    Matrix M(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j)
            M(i, j) = params[offset + static_cast<std::size_t>(i * cols + j)];
    return M;
}

}  // namespace detail

/// Builds a named parametric inclusion instance. Registered families:
///   quadratic             A = 0, B = Qx − θ + b         params: Q row-major [, b], p = n
///   l1                    A = ∂(λ‖·‖₁), B = x − θ       params: [lambda], p = n
///   shifted_l1            A = ∂(λ‖·−θ‖₁), B = x − c     params: [lambda, c...], p = n
///   linf_ball_projection  A = N_{‖·‖∞≤1}, B = x − θ     params: none, p = n
///   box_projection        A = N_{[lo,hi]^n}, B = x − θ  params: [lo, hi], p = n
///   huber                 A = ∂(λ·huber_δ), B = x − θ   params: [lambda, delta], p = n
///   gauge_square          A = 0, B = ∇h̃ of the smoothed-square gauge (θ-free)
///                                                       params: [half_width, corner_radius]
inline BuiltProblem make_problem(const std::string& name, Index n, Index p,
                                 const std::vector<double>& params, double alpha, double beta) {
    BuiltProblem out;
    out.spec.n = n;
    out.spec.p = p;
    out.spec.alpha = alpha;
    out.spec.beta = beta;
    out.default_gamma = detail::fallback_gamma(alpha, beta);

    const auto require_p_eq_n = [&] {
        if (p != n)
            throw DimensionMismatch("registry '" + name + "': requires p == n, got n=" +
                                    std::to_string(n) + ", p=" + std::to_string(p));
    };

    if (name == "quadratic") {
        require_p_eq_n();
        Matrix Q = params.empty() ? Matrix(Matrix::Identity(n, n))
                                  : detail::params_as_matrix(params, n, n);
        Vector b = Vector::Zero(n);
        if (params.size() >= static_cast<std::size_t>(n * n + n))
            for (Index i = 0; i < n; ++i) b[i] = params[static_cast<std::size_t>(n * n + i)];
        out.spec.resolvent_A = make_zero_resolvent();
        out.spec.forward_B = make_quadratic_gradient(std::move(Q), std::move(b));
        out.spec.strongly_monotone_part = MonotonePart::B;
    } else if (name == "l1") {
        require_p_eq_n();
        const double lambda = params.empty() ? 1.0 : params[0];
        out.spec.resolvent_A = make_l1_prox(lambda);
        out.spec.forward_B = make_identity_minus_theta();
        out.spec.strongly_monotone_part = MonotonePart::B;
    } else if (name == "shifted_l1") {
        require_p_eq_n();
        const double lambda = params.empty() ? 1.0 : params[0];
        Vector c = Vector::Zero(n);
        if (params.size() >= 1 + static_cast<std::size_t>(n))
            for (Index i = 0; i < n; ++i) c[i] = params[1 + static_cast<std::size_t>(i)];
        out.spec.resolvent_A = make_shifted_l1_prox(lambda);
        out.spec.forward_B = make_quadratic_gradient(Matrix::Identity(n, n), std::move(c));
        // B = x − θ + c would couple θ twice; keep θ in the prox only.
        out.spec.forward_B.eval = [c](const Vector&, const Vector& x) { return Vector(x - c); };
        out.spec.forward_B.jacobian = [](const Vector& theta, const Vector& x) {
            const Index nn = x.size();
            OperatorJacobian j;
            j.canonical = {Matrix::Zero(nn, theta.size()), Matrix::Identity(nn, nn)};
            return j;
        };
        out.spec.strongly_monotone_part = MonotonePart::B;
    } else if (name == "linf_ball_projection") {
        require_p_eq_n();
        out.spec.resolvent_A = make_linf_projection();
        out.spec.forward_B = make_identity_minus_theta();
        out.spec.strongly_monotone_part = MonotonePart::B;
    } else if (name == "box_projection") {
        require_p_eq_n();
        const double lo = params.size() > 0 ? params[0] : -1.0;
        const double hi = params.size() > 1 ? params[1] : 1.0;
        out.spec.resolvent_A = make_box_projection(lo, hi);
        out.spec.forward_B = make_identity_minus_theta();
        out.spec.strongly_monotone_part = MonotonePart::B;
    } else if (name == "huber") {
        require_p_eq_n();
        const double lambda = params.size() > 0 ? params[0] : 1.0;
        const double delta = params.size() > 1 ? params[1] : 1.0;
        out.spec.resolvent_A = make_huber_prox(lambda, delta);
        out.spec.forward_B = make_identity_minus_theta();
        out.spec.strongly_monotone_part = MonotonePart::B;
    } else if (name == "gauge_square") {
        if (n != 2) throw DimensionMismatch("gauge_square: n must be 2");
        const double hw = params.size() > 0 ? params[0] : 1.0;
        const double r = params.size() > 1 ? params[1] : 0.25;
        const ScaledSquare sc = rescale_to_unit_lipschitz(SmoothedSquare{hw, r});
        OperatorHandle B;
        B.lipschitz_bound = 1.0;
        B.eval = [sc](const Vector&, const Vector& x) {
            return Vector(h_grad(sc, Eigen::Vector2d(x[0], x[1])).grad);
        };
        B.jacobian = [sc](const Vector& theta, const Vector& x) {
            OperatorJacobian j;
            j.canonical = {Matrix::Zero(2, theta.size()),
                           Matrix(h_hessian(sc, Eigen::Vector2d(x[0], x[1])))};
            return j;
        };
        out.spec.resolvent_A = make_zero_resolvent();
        out.spec.forward_B = std::move(B);
        out.spec.strongly_monotone_part = MonotonePart::None;
        out.default_gamma = 1.0;  // gradient step of the counterexample construction
    } else {
        throw UnknownRegistryName("make_problem: unknown registry entry '" + name + "'");
    }
    return out;
}

inline const std::vector<std::string>& problem_registry_names() {
    static const std::vector<std::string> names = {
        "quadratic",      "l1",    "shifted_l1", "linf_ball_projection",
        "box_projection", "huber", "gauge_square"};
    return names;
}

}  // namespace monodiff
