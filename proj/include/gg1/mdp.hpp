#ifndef GG1_MDP_HPP
#define GG1_MDP_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "gg1/simulator.hpp"

namespace gg1 {

/// Per-unit-time wear cost k0 * exp(-k1 * mu) of running at service rate mu.
/// A negative k1 makes faster service more expensive.
template <typename Scalar = double>
struct WearPenalty {
    Scalar k0 = 0;
    Scalar k1 = 0;

    Scalar operator()(Scalar mu) const { return k0 == Scalar(0) ? Scalar(0) : k0 * std::exp(-k1 * mu); }
};

/// Uniformised service-rate control of an M/M/1 queue truncated at
/// `truncation` customers.
///
/// From state x under rate mu: x-1 with mu/L, x+1 with lambda/L, otherwise
/// stay, where L = lambda + max(mu). State 0 has no service transition and
/// arrivals at the truncation level loop back to it. Stage cost is
/// (c x + penalty(mu)) / L.
template <typename Scalar = double>
struct MdpInstance {
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

    Scalar arrival_rate = 0;
    Vector service_rates;
    int truncation = 0;
    Scalar cost_weight = 1;
    Scalar uniformization = 0;
    WearPenalty<Scalar> penalty;
    /// lambda < max(mu); an unstable instance is still solvable on the truncated chain.
    bool stable = true;

    int states() const { return truncation + 1; }
    int actions() const { return static_cast<int>(service_rates.size()); }

    Scalar up(int x) const { return x < truncation ? arrival_rate / uniformization : Scalar(0); }
    Scalar down(int x, int a) const { return x > 0 ? service_rates(a) / uniformization : Scalar(0); }
    // clamped: 1 - lambda/L - max(mu)/L can round below zero
    Scalar stay(int x, int a) const { return std::max(Scalar(0), Scalar(1) - up(x) - down(x, a)); }

    Scalar transition(int x, int a, int y) const {
        Scalar p = 0;
        if (y == x - 1) p += down(x, a);
        if (y == x + 1) p += up(x);
        if (y == x) p += stay(x, a);
        return p;
    }

    Scalar stage_cost(int x, int a) const {
        return (cost_weight * Scalar(x) + penalty(service_rates(a))) / uniformization;
    }
};

using Policy = Eigen::VectorXi;

template <typename Scalar = double>
MdpInstance<Scalar> build_instance(Scalar lambda, std::span<const Scalar> mu_grid, int truncation,
                                   Scalar cost_weight = 1, WearPenalty<Scalar> penalty = {}) {
    if (mu_grid.empty()) throw std::invalid_argument("build_instance: empty action grid");
    if (!std::is_sorted(mu_grid.begin(), mu_grid.end()))
        throw std::invalid_argument("build_instance: action grid must be sorted ascending");
    if (!(mu_grid.front() > Scalar(0))) throw std::invalid_argument("build_instance: service rates must be positive");
    if (!(lambda >= Scalar(0))) throw std::invalid_argument("build_instance: arrival rate must be nonnegative");
    if (truncation < 2) throw std::invalid_argument("build_instance: truncation must be at least 2");
    if (!(cost_weight >= Scalar(0))) throw std::invalid_argument("build_instance: cost weight must be nonnegative");
    if (!(penalty.k0 >= Scalar(0))) throw std::invalid_argument("build_instance: penalty k0 must be nonnegative");

    MdpInstance<Scalar> m;
    m.arrival_rate = lambda;
    m.service_rates = Eigen::Map<const typename MdpInstance<Scalar>::Vector>(mu_grid.data(),
                                                                           static_cast<Eigen::Index>(mu_grid.size()));
    m.truncation = truncation;
    m.cost_weight = cost_weight;
    m.uniformization = lambda + mu_grid.back();
    m.penalty = penalty;
    m.stable = lambda < mu_grid.back();
    return m;
}

template <typename Scalar>
typename MdpInstance<Scalar>::Matrix transition_matrix(const MdpInstance<Scalar>& m, const Policy& policy) {
    const int n = m.states();
    typename MdpInstance<Scalar>::Matrix P = MdpInstance<Scalar>::Matrix::Zero(n, n);
    for (int x = 0; x < n; ++x) {
        const int a = policy(x);
        if (x > 0) P(x, x - 1) = m.down(x, a);
        if (x < m.truncation) P(x, x + 1) = m.up(x);
        P(x, x) = m.stay(x, a);
    }
    return P;
}

template <typename Scalar>
typename MdpInstance<Scalar>::Vector stage_costs(const MdpInstance<Scalar>& m, const Policy& policy) {
    typename MdpInstance<Scalar>::Vector g(m.states());
    for (int x = 0; x < m.states(); ++x) g(x) = m.stage_cost(x, policy(x));
    return g;
}

template <typename Scalar = double>
struct PolicyValue {
    typename MdpInstance<Scalar>::Vector relative_values;
    Scalar rho_bar = 0;
};

/// Solves J(x) = g(x) - rho + sum_y P(y|x) J(y) with J(distinguished) = 0.
template <typename Scalar>
PolicyValue<Scalar> policy_evaluation(const MdpInstance<Scalar>& m, const Policy& policy, int distinguished = 0) {
    using Matrix = typename MdpInstance<Scalar>::Matrix;
    using Vector = typename MdpInstance<Scalar>::Vector;
    const int n = m.states();
    if (policy.size() != n) throw std::invalid_argument("policy_evaluation: policy does not cover every state");
    if (distinguished < 0 || distinguished >= n) throw std::invalid_argument("policy_evaluation: bad distinguished state");
    if ((policy.array() < 0).any() || (policy.array() >= m.actions()).any())
        throw std::invalid_argument("policy_evaluation: action index out of range");

    // unknowns: J(y) for y != distinguished, rho in the distinguished slot
    Matrix A = Matrix::Identity(n, n) - transition_matrix(m, policy);
    A.col(distinguished).setOnes();
    const Vector g = stage_costs(m, policy);
    const Vector v = A.partialPivLu().solve(g);
    const Scalar slack = std::sqrt(std::numeric_limits<Scalar>::epsilon()) * (Scalar(1) + g.template lpNorm<Eigen::Infinity>());
    if (!v.allFinite() || (A * v - g).template lpNorm<Eigen::Infinity>() > slack)
        throw std::runtime_error("policy_evaluation: singular Bellman system");

    PolicyValue<Scalar> out;
    out.rho_bar = v(distinguished);
    out.relative_values = v;
    out.relative_values(distinguished) = 0;
    return out;
}

/// Q(x, a) = g(x, a) + sum_y P(y|x, a) h(y).
template <typename Scalar>
Scalar q_value(const MdpInstance<Scalar>& m, const typename MdpInstance<Scalar>::Vector& h, int x, int a) {
    Scalar q = m.stage_cost(x, a) + m.stay(x, a) * h(x);
    if (x > 0) q += m.down(x, a) * h(x - 1);
    if (x < m.truncation) q += m.up(x) * h(x + 1);
    return q;
}

/// Bellman operator min_a Q(x, a); `greedy` receives the minimising action,
/// preferring its incoming entry on ties and otherwise the lowest index.
template <typename Scalar>
typename MdpInstance<Scalar>::Vector bellman_update(const MdpInstance<Scalar>& m,
                                                    const typename MdpInstance<Scalar>::Vector& h, Policy& greedy) {
    typename MdpInstance<Scalar>::Vector out(m.states());
    const Scalar scale = Scalar(1) + h.template lpNorm<Eigen::Infinity>();
    for (int x = 0; x < m.states(); ++x) {
        Scalar best = std::numeric_limits<Scalar>::infinity();
        int best_a = 0;
        for (int a = 0; a < m.actions(); ++a) {
            const Scalar q = q_value(m, h, x, a);
            if (q < best) {
                best = q;
                best_a = a;
            }
        }
        const int current = greedy(x);
        if (current >= 0 && current < m.actions() &&
            q_value(m, h, x, current) <= best + Scalar(64) * std::numeric_limits<Scalar>::epsilon() * scale)
            best_a = current;
        out(x) = best;
        greedy(x) = best_a;
    }
    return out;
}

template <typename Scalar>
Scalar bellman_residual(const MdpInstance<Scalar>& m, const typename MdpInstance<Scalar>::Vector& h, Scalar rho) {
    Policy scratch = Policy::Constant(m.states(), -1);
    const auto Th = bellman_update(m, h, scratch);
    return (Th.array() - rho - h.array()).abs().maxCoeff();
}

enum class SolverMethod { policy_iteration, relative_value_iteration };

inline std::string_view to_string(SolverMethod method) {
    return method == SolverMethod::policy_iteration ? "policy-iteration" : "relative-value-iteration";
}

inline SolverMethod solver_method_from_string(std::string_view name) {
    if (name == "policy-iteration") return SolverMethod::policy_iteration;
    if (name == "relative-value-iteration") return SolverMethod::relative_value_iteration;
    throw std::invalid_argument("unknown solver method '" + std::string(name) + "'");
}

template <typename Scalar = double>
struct MdpSolution {
    Policy policy;
    typename MdpInstance<Scalar>::Vector relative_values;
    Scalar rho_bar = 0;
    int iterations = 0;
    Scalar residual = 0;
    SolverMethod method = SolverMethod::policy_iteration;
    int distinguished = 0;
};

class IterationCapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

template <typename Scalar>
MdpSolution<Scalar> solve_optimal(const MdpInstance<Scalar>& m, SolverMethod method, Scalar tol = Scalar(1e-10),
                                  int max_iterations = 1'000'000, int distinguished = 0) {
    using Vector = typename MdpInstance<Scalar>::Vector;
    MdpSolution<Scalar> sol;
    sol.method = method;
    sol.distinguished = distinguished;

    if (method == SolverMethod::policy_iteration) {
        Policy policy = Policy::Zero(m.states());
        for (int it = 1;; ++it) {
            if (it > max_iterations) throw IterationCapExceeded("policy iteration did not converge");
            const auto value = policy_evaluation(m, policy, distinguished);
            Policy improved = policy;
            bellman_update(m, value.relative_values, improved);
            if (improved == policy) {
                sol.policy = policy;
                sol.relative_values = value.relative_values;
                sol.rho_bar = value.rho_bar;
                sol.iterations = it;
                break;
            }
            policy = improved;
        }
    } else {
        Vector h = Vector::Zero(m.states());
        Policy greedy = Policy::Constant(m.states(), -1);
        // a stricter internal stop keeps the relative values, not just the
        // span of successive differences, within tol; the floor is the
        // rounding noise of one sweep at the current magnitude
        const Scalar inner_tol = tol * Scalar(1e-3);
        for (int it = 1;; ++it) {
            if (it > max_iterations) throw IterationCapExceeded("relative value iteration did not converge");
            const Vector Th = bellman_update(m, h, greedy);
            const Scalar rho = Th(distinguished);
            const Vector next = Th.array() - rho;
            const Scalar change = (next - h).template lpNorm<Eigen::Infinity>();
            const Scalar floor = Scalar(64) * std::numeric_limits<Scalar>::epsilon() *
                                 (Scalar(1) + next.template lpNorm<Eigen::Infinity>());
            h = next;
            sol.rho_bar = rho;
            sol.iterations = it;
            if (change < std::max(inner_tol, floor)) break;
        }
        sol.relative_values = h;
        sol.policy = greedy;
    }
    sol.residual = bellman_residual(m, sol.relative_values, sol.rho_bar);
    return sol;
}

/// Continuous-time average cost rate of a policy value, rho_bar * L.
template <typename Scalar>
Scalar cost_rate(const MdpInstance<Scalar>& m, Scalar rho_bar) {
    return rho_bar * m.uniformization;
}

/// Average response per customer implied by the policy's holding cost rate
/// (wear penalty excluded): R_bar_n = H_bar_t / lambda.
template <typename Scalar>
Scalar implied_response(const MdpSolution<Scalar>& solution, const MdpInstance<Scalar>& m) {
    if (!(m.arrival_rate > Scalar(0))) throw std::invalid_argument("implied_response: arrival rate must be positive");
    MdpInstance<Scalar> holding_only = m;
    holding_only.penalty = {};
    const auto value = policy_evaluation(holding_only, solution.policy, solution.distinguished);
    return cost_rate(holding_only, value.rho_bar) / m.arrival_rate;
}

/// Simulates the controlled M/M/1 queue in continuous time under `policy`
/// (service rate chosen by current queue length, capped at the truncation
/// level) with FCFS order. Only seed, warmup, horizon and event_cap are read
/// from the options; pending customers are always completed.
SimulationResult simulate_policy(const MdpInstance<double>& instance, const Policy& policy,
                                 const SimulationOptions& options);

}  // namespace gg1

#endif  // GG1_MDP_HPP
