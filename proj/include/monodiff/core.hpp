#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

/// monodiff: differentiation of solutions to parametric monotone inclusions
/// 0 ∈ A_θ(x) + B_θ(x), solved as fixed points of the forward-backward map
/// H(θ,x) = R_{γA_θ}(x − γ B_θ(x)).
namespace monodiff {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct DimensionMismatch : std::runtime_error {
    explicit DimensionMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct NonPositiveModulus : std::runtime_error {
    explicit NonPositiveModulus(const std::string& what) : std::runtime_error(what) {}
};

struct DivergenceDetected : std::runtime_error {
    explicit DivergenceDetected(const std::string& what) : std::runtime_error(what) {}
};

struct SingularSystem : std::runtime_error {
    explicit SingularSystem(const std::string& what) : std::runtime_error(what) {}
};

struct UnknownRegistryName : std::runtime_error {
    explicit UnknownRegistryName(const std::string& what) : std::runtime_error(what) {}
};

struct InvarianceViolated : std::runtime_error {
    explicit InvarianceViolated(const std::string& what) : std::runtime_error(what) {}
};

struct SpecViolation : std::runtime_error {
    explicit SpecViolation(const std::string& what) : std::runtime_error(what) {}
};

struct SurjectivityLost : std::runtime_error {
    explicit SurjectivityLost(const std::string& what) : std::runtime_error(what) {}
};

struct StalePoint : std::runtime_error {
    explicit StalePoint(const std::string& what) : std::runtime_error(what) {}
};

struct NotContractive : std::runtime_error {
    explicit NotContractive(const std::string& what) : std::runtime_error(what) {}
};

// ---------------------------------------------------------------------------
// Step size
// ---------------------------------------------------------------------------

/// Positive step size γ of the forward-backward map. The fixed-point set does
/// not depend on γ; contraction bounds do.
struct StepSize {
    double gamma;

    explicit StepSize(double g) : gamma(g) {
        if (!(g > 0.0))
            throw NonPositiveModulus("StepSize: gamma must be positive, got " + std::to_string(g));
    }
};

// ---------------------------------------------------------------------------
// Operator handles
// ---------------------------------------------------------------------------

/// One selection of a joint Clarke Jacobian: [theta_block point_block] with
/// theta_block = ∂/∂θ (rows×p) and point_block = ∂/∂point (rows×rows).
struct JacobianSelection {
    Matrix theta_block;
    Matrix point_block;
};

/// A Jacobian selection together with the extreme selections available at the
/// evaluation point. `extremes` is empty at points of differentiability;
/// at a kink it enumerates the one-sided limits of classical Jacobians,
/// canonical selection first.
struct OperatorJacobian {
    JacobianSelection canonical;
    std::vector<JacobianSelection> extremes;

    /// All selections to enumerate: the extremes when present, otherwise just
    /// the canonical one.
    std::vector<const JacobianSelection*> selections() const {
        std::vector<const JacobianSelection*> out;
        if (extremes.empty()) {
            out.push_back(&canonical);
        } else {
            out.reserve(extremes.size());
            for (const auto& e : extremes) out.push_back(&e);
        }
        return out;
    }
};

/// Resolvent oracle u ↦ R_{γA_θ}(u) with its joint Clarke-Jacobian selection
/// in (θ,u). Must be safely callable from multiple threads.
struct ResolventHandle {
    std::function<Vector(const Vector& theta, const Vector& u, double gamma)> eval;
    std::function<OperatorJacobian(const Vector& theta, const Vector& u, double gamma)> jacobian;
    /// strong-monotonicity modulus of the underlying operator A (0 if merely monotone)
    double monotonicity_modulus = 0.0;
};

/// Single-valued monotone operator x ↦ B_θ(x) with joint Clarke-Jacobian
/// selection in (θ,x).
struct OperatorHandle {
    std::function<Vector(const Vector& theta, const Vector& x)> eval;
    std::function<OperatorJacobian(const Vector& theta, const Vector& x)> jacobian;
    std::optional<double> lipschitz_bound;
    double monotonicity_modulus = 0.0;
};

// ---------------------------------------------------------------------------
// Problem specification
// ---------------------------------------------------------------------------

enum class MonotonePart { A, B, None };

inline const char* to_string(MonotonePart part) {
    switch (part) {
        case MonotonePart::A: return "A";
        case MonotonePart::B: return "B";
        default: return "none";
    }
}

/// A parametric inclusion instance 0 ∈ A_θ(x) + B_θ(x). All fields are set at
/// construction and never mutated afterwards.
struct ProblemSpec {
    Index n = 0;  ///< variable dimension
    Index p = 0;  ///< parameter dimension
    ResolventHandle resolvent_A;
    OperatorHandle forward_B;
    double alpha = 0.0;  ///< strong-monotonicity modulus of the declared part
    double beta = 0.0;   ///< Lipschitz modulus of B_θ
    MonotonePart strongly_monotone_part = MonotonePart::None;
};

// ---------------------------------------------------------------------------
// Results
// ---------------------------------------------------------------------------

/// Jacobian blocks of the forward-backward composition at a point:
/// [U V] selects the resolvent Jacobian at (θ, x − γB_θ(x)) and [W Z] the
/// forward-operator Jacobian at (θ, x).
struct JacobianBlocks {
    Matrix U;  ///< n×p, resolvent θ-block
    Matrix V;  ///< n×n, resolvent point-block
    Matrix W;  ///< n×p, forward-operator θ-block
    Matrix Z;  ///< n×n, forward-operator point-block
    std::vector<JacobianSelection> resolvent_extremes;  ///< alternatives for [U V], canonical first
    std::vector<JacobianSelection> forward_extremes;    ///< alternatives for [W Z], canonical first
    Vector at_resolvent_point;  ///< x − γB_θ(x)
    Vector at_forward_point;    ///< x
    Vector theta;
};

struct SolveReport {
    Vector x_star;
    double residual_norm = 0.0;  ///< ‖x* − H(θ,x*)‖, recomputed at the returned point
    Index iterations = 0;
    double measured_rate = 0.0;  ///< geometric fit of successive-difference ratios
    double gamma_used = 0.0;
};

struct MaxIterationsExceeded : std::runtime_error {
    SolveReport best;
    MaxIterationsExceeded(const std::string& what, SolveReport report)
        : std::runtime_error(what), best(std::move(report)) {}
};

/// Verdict of the sampled contractivity check ‖V(I−γZ)‖_op < 1 against the
/// theoretical bound of the declared strongly monotone part.
struct ContractionCertificate {
    double sampled_norm = 0.0;  ///< max over sampled selections of ‖V(I−γZ)‖_op
    double theory_bound = 0.0;  ///< τ per regime; NaN when no regime declared or γ inadmissible
    bool verdict = false;       ///< pass iff sampled_norm < 1
};

/// Implicit conservative Jacobian J = (I − V(I−γZ))⁻¹ (U − γVW) of θ ↦ x*(θ).
struct ImplicitJacobian {
    Matrix J;  ///< canonical selection, n×p
    double condition_estimate = 0.0;  ///< condition number of I − V(I−γZ)
    JacobianBlocks blocks;
    /// Jacobians for every enumerated selection combination (canonical first).
    /// Size 1 away from kinks.
    std::vector<Matrix> all_selections;
};

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

/// Checks ProblemSpec invariants and probes both operator handles at a fixed
/// pseudo-random point for dimension consistency.
inline void validate(const ProblemSpec& spec) {
    if (spec.n < 1 || spec.p < 1)
        throw DimensionMismatch("ProblemSpec: need n >= 1 and p >= 1, got n=" +
                                std::to_string(spec.n) + ", p=" + std::to_string(spec.p));
    if (spec.alpha < 0.0 || spec.beta < 0.0)
        throw NonPositiveModulus("ProblemSpec: alpha and beta must be nonnegative");
    if (spec.strongly_monotone_part != MonotonePart::None && !(spec.alpha > 0.0))
        throw NonPositiveModulus(
            "ProblemSpec: strong monotonicity declared for part " +
            std::string(to_string(spec.strongly_monotone_part)) + " but alpha <= 0");
    if (!spec.resolvent_A.eval || !spec.resolvent_A.jacobian)
        throw DimensionMismatch("ProblemSpec: resolvent_A handle is not set");
    if (!spec.forward_B.eval || !spec.forward_B.jacobian)
        throw DimensionMismatch("ProblemSpec: forward_B handle is not set");

    // Deterministic probe point; any generic point does.
    Vector theta(spec.p), x(spec.n);
    for (Index j = 0; j < spec.p; ++j) theta[j] = 0.31 + 0.17 * static_cast<double>(j % 7);
    for (Index i = 0; i < spec.n; ++i) x[i] = -0.23 + 0.11 * static_cast<double>(i % 5);
    const double gamma_probe = 0.5;

    const Vector bx = spec.forward_B.eval(theta, x);
    if (bx.size() != spec.n)
        throw DimensionMismatch("forward_B returned a vector of size " + std::to_string(bx.size()) +
                                ", expected " + std::to_string(spec.n));
    const Vector rx = spec.resolvent_A.eval(theta, x, gamma_probe);
    if (rx.size() != spec.n)
        throw DimensionMismatch("resolvent_A returned a vector of size " + std::to_string(rx.size()) +
                                ", expected " + std::to_string(spec.n));

    const auto check_selection = [&](const JacobianSelection& sel, const char* who) {
        if (sel.theta_block.rows() != spec.n || sel.theta_block.cols() != spec.p ||
            sel.point_block.rows() != spec.n || sel.point_block.cols() != spec.n)
            throw DimensionMismatch(std::string(who) + " Jacobian selection has inconsistent shape");
    };
    const OperatorJacobian jb = spec.forward_B.jacobian(theta, x);
    check_selection(jb.canonical, "forward_B");
    for (const auto& e : jb.extremes) check_selection(e, "forward_B");
    const OperatorJacobian ja = spec.resolvent_A.jacobian(theta, x, gamma_probe);
    check_selection(ja.canonical, "resolvent_A");
    for (const auto& e : ja.extremes) check_selection(e, "resolvent_A");
}

}  // namespace monodiff
