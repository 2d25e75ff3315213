#ifndef NIL3_SOLVER_HPP
#define NIL3_SOLVER_HPP

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "nil3/ambient.hpp"
#include "nil3/mesh.hpp"
#include "nil3/parallel.hpp"

// The prescribed-mean-curvature operator div(X_u) = 2H with
//   X_u = (alpha/W, beta/W),  alpha = tau y + u_x,  beta = -tau x + u_y,
//   W^2 = 1 + alpha^2 + beta^2,
// discretized with P1 elements. The weak residual is the gradient of the
// convex energy  E(u) = sum_T int_T W + 2H int u, so the damped Newton
// iteration does an Armijo line search on E; the Newton matrix is symmetric
// positive definite.

namespace nil3 {

struct CoefficientJet {
    double alpha = 0.0;
    double beta = 0.0;
    double w = 1.0;
};

inline CoefficientJet coefficients(const GraphJet& jet, const AmbientParams& params) {
    CoefficientJet c;
    c.alpha = params.tau * jet.y + jet.ux;
    c.beta = -params.tau * jet.x + jet.uy;
    c.w = std::sqrt(1.0 + c.alpha * c.alpha + c.beta * c.beta);
    return c;
}

/// Pointwise non-divergence form
///   L_H(u) = (1/W^3) [(1+beta^2) u_xx + (1+alpha^2) u_yy - 2 alpha beta u_xy] - 2H,
/// zero exactly when the graph has mean curvature H at the point: expanding
/// div(X_u) cancels every tau term and leaves this bracket over W^3, matching
/// the classical graph equation. Used as an oracle on analytic jets, not by
/// the discrete solver.
inline double residual_nondiv(const GraphJet& jet, const AmbientParams& params) {
    const CoefficientJet c = coefficients(jet, params);
    const double bracket = (1.0 + c.beta * c.beta) * jet.uxx +
                           (1.0 + c.alpha * c.alpha) * jet.uyy -
                           2.0 * c.alpha * c.beta * jet.uxy;
    return bracket / (c.w * c.w * c.w) - 2.0 * params.H;
}

inline Vec2 flux_vector(const GraphJet& jet, const AmbientParams& params) {
    const CoefficientJet c = coefficients(jet, params);
    return {c.alpha / c.w, c.beta / c.w};
}

/// X_u at position p for a piecewise-linear field with gradient g there.
inline Vec2 flux_vector_at(Vec2 p, Vec2 g, const AmbientParams& params) {
    const double alpha = params.tau * p.y + g.x;
    const double beta = -params.tau * p.x + g.y;
    const double w = std::sqrt(1.0 + alpha * alpha + beta * beta);
    return {alpha / w, beta / w};
}

struct SolveOptions {
    int max_newton_iters = 50;
    double newton_tol = 1e-10;  // on the weak residual's infinity norm
    double damping = 0.5;       // backtracking factor of the line search
    int continuation_steps = 1; // boundary-data amplitude ramp
    double data_cap = 1e6;      // clip for unbounded C-arc data
    std::size_t chunk_size = 512;

    void validate() const {
        if (max_newton_iters <= 0 || newton_tol <= 0.0 || damping <= 0.0 ||
            damping >= 1.0 || continuation_steps <= 0)
            throw InvalidArgument("SolveOptions: positive tolerances and counts required");
    }
};

namespace fem {

/// Midpoint quadrature triple on a triangle (degree-2 exact).
inline std::array<Vec2, 3> quad_points(const Mesh& mesh, int t) {
    const Vec2 a = mesh.nodes[mesh.tris[t][0]];
    const Vec2 b = mesh.nodes[mesh.tris[t][1]];
    const Vec2 c = mesh.nodes[mesh.tris[t][2]];
    return {0.5 * (a + b), 0.5 * (b + c), 0.5 * (c + a)};
}

struct AssemblyChunk {
    std::vector<std::pair<int, double>> f;
    std::vector<Eigen::Triplet<double>> j;
};

/// Weak residual F_i = int X_u . grad phi_i + 2H int phi_i over all nodes.
inline std::vector<double> weak_residual(const Mesh& mesh, const std::vector<double>& u,
                                         const AmbientParams& params,
                                         std::size_t chunk_size = 512) {
    auto chunks = map_chunks<std::vector<std::pair<int, double>>>(
        mesh.n_tris(), chunk_size, [&](std::size_t b, std::size_t e, std::size_t) {
            std::vector<std::pair<int, double>> out;
            out.reserve((e - b) * 3);
            for (std::size_t t = b; t < e; ++t) {
                const auto& tri = mesh.tris[t];
                Vec2 g{0, 0};
                for (int k = 0; k < 3; ++k)
                    g += u[tri[k]] * mesh.grad_phi(int(t), k);
                const double w_q = mesh.tri_area(int(t)) / 3.0;
                Vec2 xint{0, 0};  // int_T X_u; grad phi_k is constant on T
                for (const Vec2& q : quad_points(mesh, int(t)))
                    xint += w_q * flux_vector_at(q, g, params);
                for (int k = 0; k < 3; ++k) {
                    const double val = dot(xint, mesh.grad_phi(int(t), k)) +
                                       2.0 * params.H * mesh.tri_area(int(t)) / 3.0;
                    out.push_back({tri[k], val});
                }
            }
            return out;
        });
    std::vector<double> F(u.size(), 0.0);
    for (const auto& chunk : chunks)
        for (const auto& [i, v] : chunk)
            F[i] += v;
    return F;
}

/// Energy E(u) = sum_T int_T W + 2H int u with the same quadrature as the
/// residual (the residual is its exact gradient).
inline double energy(const Mesh& mesh, const std::vector<double>& u,
                     const AmbientParams& params, std::size_t chunk_size = 512) {
    auto chunks = map_chunks<double>(
        mesh.n_tris(), chunk_size, [&](std::size_t b, std::size_t e, std::size_t) {
            double acc = 0.0;
            for (std::size_t t = b; t < e; ++t) {
                const auto& tri = mesh.tris[t];
                Vec2 g{0, 0};
                double ubar = 0.0;
                for (int k = 0; k < 3; ++k) {
                    g += u[tri[k]] * mesh.grad_phi(int(t), k);
                    ubar += u[tri[k]] / 3.0;
                }
                const double w_q = mesh.tri_area(int(t)) / 3.0;
                for (const Vec2& q : quad_points(mesh, int(t))) {
                    const double alpha = params.tau * q.y + g.x;
                    const double beta = -params.tau * q.x + g.y;
                    acc += w_q * std::sqrt(1.0 + alpha * alpha + beta * beta);
                }
                acc += 2.0 * params.H * mesh.tri_area(int(t)) * ubar;
            }
            return acc;
        });
    double total = 0.0;
    for (double c : chunks)
        total += c;
    return total;
}

/// Newton matrix dF/du (full node indexing, symmetric positive definite on
/// the interior block): per quadrature point M = (W^2 I - a a^T)/W^3.
inline std::vector<Eigen::Triplet<double>>
jacobian_triplets(const Mesh& mesh, const std::vector<double>& u,
                  const AmbientParams& params, std::size_t chunk_size = 512) {
    auto chunks = map_chunks<std::vector<Eigen::Triplet<double>>>(
        mesh.n_tris(), chunk_size, [&](std::size_t b, std::size_t e, std::size_t) {
            std::vector<Eigen::Triplet<double>> out;
            out.reserve((e - b) * 9);
            for (std::size_t t = b; t < e; ++t) {
                const auto& tri = mesh.tris[t];
                Vec2 g{0, 0};
                for (int k = 0; k < 3; ++k)
                    g += u[tri[k]] * mesh.grad_phi(int(t), k);
                const double w_q = mesh.tri_area(int(t)) / 3.0;
                double m11 = 0.0, m12 = 0.0, m22 = 0.0;
                for (const Vec2& q : quad_points(mesh, int(t))) {
                    const double alpha = params.tau * q.y + g.x;
                    const double beta = -params.tau * q.x + g.y;
                    const double w2 = 1.0 + alpha * alpha + beta * beta;
                    const double w3 = w2 * std::sqrt(w2);
                    m11 += w_q * (w2 - alpha * alpha) / w3;
                    m12 += w_q * (-alpha * beta) / w3;
                    m22 += w_q * (w2 - beta * beta) / w3;
                }
                for (int r = 0; r < 3; ++r) {
                    const Vec2 gr = mesh.grad_phi(int(t), r);
                    for (int c = 0; c < 3; ++c) {
                        const Vec2 gc = mesh.grad_phi(int(t), c);
                        const double val = gr.x * (m11 * gc.x + m12 * gc.y) +
                                           gr.y * (m12 * gc.x + m22 * gc.y);
                        out.push_back({tri[r], tri[c], val});
                    }
                }
            }
            return out;
        });
    std::vector<Eigen::Triplet<double>> all;
    std::size_t total = 0;
    for (const auto& c : chunks)
        total += c.size();
    all.reserve(total);
    for (const auto& c : chunks)
        all.insert(all.end(), c.begin(), c.end());
    return all;
}

}  // namespace fem

struct SolveResult {
    ScalarField field;
    bool converged = false;
    int iters = 0;
    std::vector<double> residual_history;
    bool flagged_blowup = false;
    double max_gradient = 0.0;
    int clipped_data_nodes = 0;
    std::string message;
};

inline double max_gradient_norm(const ScalarField& f) {
    double m = 0.0;
    for (int t = 0; t < f.mesh->n_tris(); ++t)
        m = std::max(m, norm(f.gradient(t)));
    return m;
}

inline bool newton_step(const Mesh& mesh, const AmbientParams& params,
                        const SolveOptions& opts, const std::vector<int>& dof,
                        int n_dof, std::vector<double>& u, const std::vector<double>& F,
                        Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>& ldlt,
                        bool polish);

/// Damped Newton on the weak form with Dirichlet data prescribed at boundary
/// nodes (entries of `boundary_values` at non-boundary indices are ignored).
/// Non-convergence is an expected outcome near genuine divergence: the last
/// iterate and the residual history are returned either way. Iterates with
/// max |grad u| > 1/h are flagged as gradient blow-up, not errors.
inline SolveResult solve_dirichlet(const Mesh& mesh,
                                   const std::vector<double>& boundary_values,
                                   const SolveOptions& opts = {},
                                   const ScalarField* warm_start = nullptr) {
    opts.validate();
    const AmbientParams& params = mesh.domain.params;
    const int n = mesh.n_nodes();

    SolveResult res;
    std::vector<int> dof(n, -1);
    int n_dof = 0;
    for (int i = 0; i < n; ++i)
        if (!mesh.is_boundary_node(i))
            dof[i] = n_dof++;

    std::vector<double> target(n, 0.0);
    double data_mean = 0.0;
    int n_bnd = 0;
    for (int i = 0; i < n; ++i) {
        if (!mesh.is_boundary_node(i))
            continue;
        double v = boundary_values[i];
        if (std::abs(v) > opts.data_cap) {
            v = std::clamp(v, -opts.data_cap, opts.data_cap);
            ++res.clipped_data_nodes;
        }
        target[i] = v;
        data_mean += v;
        ++n_bnd;
    }
    data_mean /= std::max(1, n_bnd);

    std::vector<double> u(n, data_mean);
    if (warm_start) {
        u = warm_start->values;
    }

    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
    const int stages = warm_start ? 1 : opts.continuation_steps;
    bool ok = true;
    for (int stage = 1; stage <= stages && ok; ++stage) {
        const double scale = double(stage) / double(stages);
        for (int i = 0; i < n; ++i)
            if (mesh.is_boundary_node(i))
                u[i] = scale * target[i];

        for (int iter = 0;; ++iter) {
            std::vector<double> F =
                fem::weak_residual(mesh, u, params, opts.chunk_size);
            double rnorm = 0.0;
            for (int i = 0; i < n; ++i)
                if (dof[i] >= 0)
                    rnorm = std::max(rnorm, std::abs(F[i]));
            if (stage == stages) {
                res.residual_history.push_back(rnorm);
                res.iters = iter;
            }
            if (rnorm <= opts.newton_tol) {
                // One polishing step toward the quadratic floor keeps
                // solution-level comparisons far below newton_tol.
                if (rnorm > 1e-15 && iter < opts.max_newton_iters + 2) {
                    if (newton_step(mesh, params, opts, dof, n_dof, u, F, ldlt, true))
                        continue;
                }
                break;
            }
            if (iter >= opts.max_newton_iters) {
                ok = false;
                res.message = "Newton reached the iteration cap";
                break;
            }
            if (!newton_step(mesh, params, opts, dof, n_dof, u, F, ldlt, false)) {
                ok = false;
                res.message = "Newton line search stalled";
                break;
            }
        }
    }

    res.converged = ok;
    res.field = ScalarField();
    res.field.mesh = &mesh;
    res.field.values = std::move(u);
    res.max_gradient = max_gradient_norm(res.field);
    res.flagged_blowup = res.max_gradient > 1.0 / mesh.h;
    res.field.diverged = !ok;
    return res;
}

/// One damped Newton update; returns false when no decrease was possible.
/// `polish` takes a plain full step accepted only if the residual shrinks.
inline bool newton_step(const Mesh& mesh, const AmbientParams& params,
                        const SolveOptions& opts, const std::vector<int>& dof,
                        int n_dof, std::vector<double>& u, const std::vector<double>& F,
                        Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>& ldlt,
                        bool polish) {
    const int n = mesh.n_nodes();
    auto trip = fem::jacobian_triplets(mesh, u, params, opts.chunk_size);
    std::vector<Eigen::Triplet<double>> reduced;
    reduced.reserve(trip.size());
    for (const auto& t : trip)
        if (dof[t.row()] >= 0 && dof[t.col()] >= 0)
            reduced.push_back({dof[t.row()], dof[t.col()], t.value()});
    Eigen::SparseMatrix<double> J(n_dof, n_dof);
    J.setFromTriplets(reduced.begin(), reduced.end());
    Eigen::VectorXd rhs(n_dof);
    for (int i = 0; i < n; ++i)
        if (dof[i] >= 0)
            rhs[dof[i]] = -F[i];
    ldlt.compute(J);
    if (ldlt.info() != Eigen::Success) {
        // SPD in exact arithmetic; regularize on roundoff trouble.
        Eigen::SparseMatrix<double> I(n_dof, n_dof);
        I.setIdentity();
        double lam = 1e-12;
        for (int k = 0; k < 8 && ldlt.info() != Eigen::Success; ++k, lam *= 100.0)
            ldlt.compute(J + lam * I);
        if (ldlt.info() != Eigen::Success)
            return false;
    }
    Eigen::VectorXd d = ldlt.solve(rhs);
    if (!d.allFinite())
        return false;

    if (polish) {
        std::vector<double> trial = u;
        for (int i = 0; i < n; ++i)
            if (dof[i] >= 0)
                trial[i] += d[dof[i]];
        const std::vector<double> Ft =
            fem::weak_residual(mesh, trial, params, opts.chunk_size);
        double r0 = 0.0, r1 = 0.0;
        for (int i = 0; i < n; ++i)
            if (dof[i] >= 0) {
                r0 = std::max(r0, std::abs(F[i]));
                r1 = std::max(r1, std::abs(Ft[i]));
            }
        if (r1 < 0.5 * r0) {
            u = trial;
            return true;
        }
        return false;
    }

    double gdotd = 0.0;
    for (int i = 0; i < n; ++i)
        if (dof[i] >= 0)
            gdotd += F[i] * d[dof[i]];
    const double e0 = fem::energy(mesh, u, params, opts.chunk_size);
    // Armijo with a roundoff allowance: near the minimum the true decrease
    // per step (~|F|^2) falls below the fp resolution of E, which would
    // otherwise freeze the iteration just above newton_tol.
    const double fudge = 8.0 * std::numeric_limits<double>::epsilon() * std::abs(e0);
    double step = 1.0;
    std::vector<double> trial(u.size());
    for (int ls = 0; ls < 60; ++ls) {
        trial = u;
        for (int i = 0; i < n; ++i)
            if (dof[i] >= 0)
                trial[i] += step * d[dof[i]];
        const double e1 = fem::energy(mesh, trial, params, opts.chunk_size);
        if (e1 <= e0 + 1e-4 * step * gdotd + fudge) {
            u = trial;
            return true;
        }
        step *= opts.damping;
        if (step < 1e-14)
            break;
    }
    return false;
}

/// Nodal weak residual restricted to interior nodes (boundary entries zero).
inline ScalarField residual_div(const ScalarField& field, const AmbientParams& params) {
    const Mesh& mesh = *field.mesh;
    auto F = fem::weak_residual(mesh, field.values, params);
    ScalarField out(mesh, 0.0);
    for (int i = 0; i < mesh.n_nodes(); ++i)
        out[i] = mesh.is_boundary_node(i) ? 0.0 : F[i];
    return out;
}

/// Per-triangle monotonicity pairing <grad u - grad v, X_u - X_v> evaluated
/// at the centroid; nonnegative, zero only where the gradients agree.
inline std::vector<double> monotonicity_pairing(const ScalarField& u,
                                                const ScalarField& v) {
    if (u.mesh != v.mesh)
        throw InvalidArgument("monotonicity_pairing: fields live on different meshes");
    const Mesh& mesh = *u.mesh;
    const AmbientParams& params = mesh.domain.params;
    std::vector<double> out(mesh.n_tris());
    for (int t = 0; t < mesh.n_tris(); ++t) {
        const Vec2 gu = u.gradient(t), gv = v.gradient(t);
        const Vec2 c = mesh.centroid(t);
        out[t] = dot(gu - gv, flux_vector_at(c, gu, params) - flux_vector_at(c, gv, params));
    }
    return out;
}

struct ComparisonReport {
    bool applicable = false;  // boundary ordering u >= v - tol holds
    bool pass = false;
    double worst_interior_violation = 0.0;  // max(v - u) over interior, >= 0
    double worst_boundary_gap = 0.0;        // max(v - u) over boundary
    int violating_node = -1;
};

/// Discrete comparison check: if u >= v - tol on the boundary then u >= v - tol
/// in the interior. Reports not-applicable when the boundary ordering fails.
inline ComparisonReport verify_comparison(const ScalarField& u, const ScalarField& v,
                                          double tol = 1e-9) {
    if (u.mesh != v.mesh)
        throw InvalidArgument("verify_comparison: fields live on different meshes");
    const Mesh& mesh = *u.mesh;
    ComparisonReport rep;
    for (int i = 0; i < mesh.n_nodes(); ++i)
        if (mesh.is_boundary_node(i))
            rep.worst_boundary_gap = std::max(rep.worst_boundary_gap, v[i] - u[i]);
    rep.applicable = rep.worst_boundary_gap <= tol;
    if (!rep.applicable)
        return rep;
    for (int i = 0; i < mesh.n_nodes(); ++i) {
        if (mesh.is_boundary_node(i))
            continue;
        const double gap = v[i] - u[i];
        if (gap > rep.worst_interior_violation) {
            rep.worst_interior_violation = gap;
            rep.violating_node = i;
        }
    }
    rep.pass = rep.worst_interior_violation <= tol;
    return rep;
}

/// Boundary node values from the domain's per-arc data handles.
inline std::vector<double> boundary_values_from_domain(const Mesh& mesh) {
    std::vector<double> out(mesh.nodes.size(), 0.0);
    for (int i = 0; i < mesh.n_nodes(); ++i) {
        const auto& info = mesh.boundary[i];
        if (info.arc >= 0)
            out[i] = mesh.domain.arcs[info.arc].data_at(mesh.nodes[i]);
    }
    return out;
}

}  // namespace nil3

#endif  // NIL3_SOLVER_HPP
