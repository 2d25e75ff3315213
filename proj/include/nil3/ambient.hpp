#ifndef NIL3_AMBIENT_HPP
#define NIL3_AMBIENT_HPP

#include <array>
#include <cmath>

#include "nil3/geometry.hpp"

// The Heisenberg space Nil3(tau): R^3 with the metric
//   g = dx^2 + dy^2 + (tau (y dx - x dy) + dz)^2,
// its canonical orthonormal frame
//   E1 = d_x - tau y d_z,  E2 = d_y + tau x d_z,  E3 = xi = d_z,
// the Riemannian connection on that frame, the Ricci form, and the
// normal/W data of a vertical graph {z = u(x,y)}.
//
// Isometries (documented, not implemented): translations generated by
// F1 = d_x + tau y d_z, F2 = d_y - tau x d_z, F3 = d_z and rotations about
// the z-axis generated by F4 = -y d_x + x d_y.

namespace nil3 {

struct AmbientParams {
    double tau = 0.0;
    double H = 0.0;  // mean curvature w.r.t. the upward normal, H >= 0

    void validate() const {
        if (!std::isfinite(tau) || !std::isfinite(H))
            throw InvalidArgument("AmbientParams: tau and H must be finite");
        if (H < 0.0)
            throw InvalidArgument("AmbientParams: H must be >= 0");
    }
};

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3() = default;
    Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    Vec3 operator+(Vec3 o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(Vec3 o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
};
inline Vec3 operator*(double s, Vec3 v) { return v * s; }

/// Components in the orthonormal frame {E1, E2, E3 = xi}.
struct FrameVector {
    double c1 = 0.0, c2 = 0.0, c3 = 0.0;

    FrameVector() = default;
    FrameVector(double a, double b, double c) : c1(a), c2(b), c3(c) {}

    FrameVector operator+(FrameVector o) const { return {c1 + o.c1, c2 + o.c2, c3 + o.c3}; }
    FrameVector operator-(FrameVector o) const { return {c1 - o.c1, c2 - o.c2, c3 - o.c3}; }
    FrameVector operator*(double s) const { return {c1 * s, c2 * s, c3 * s}; }
    double operator[](int i) const { return i == 0 ? c1 : (i == 1 ? c2 : c3); }

    double norm2() const { return c1 * c1 + c2 * c2 + c3 * c3; }
    double norm() const { return std::sqrt(norm2()); }
};
inline FrameVector operator*(double s, FrameVector v) { return v * s; }
inline double frame_dot(FrameVector a, FrameVector b) {
    return a.c1 * b.c1 + a.c2 * b.c2 + a.c3 * b.c3;
}

/// First- and second-order data of a graph function at a base point.
/// uxy stands for both mixed partials.
struct GraphJet {
    double x = 0.0, y = 0.0;
    double u = 0.0;
    double ux = 0.0, uy = 0.0;
    double uxx = 0.0, uxy = 0.0, uyy = 0.0;
};

/// g(v, w) at p in Euclidean coordinates.
inline double metric_eval(Vec3 p, Vec3 v, Vec3 w, const AmbientParams& params) {
    const double tau = params.tau;
    const double av = tau * (p.y * v.x - p.x * v.y) + v.z;
    const double aw = tau * (p.y * w.x - p.x * w.y) + w.z;
    return v.x * w.x + v.y * w.y + av * aw;
}

/// Coordinate components of {E1, E2, xi} at p.
inline std::array<Vec3, 3> frame_at(Vec3 p, const AmbientParams& params) {
    const double tau = params.tau;
    return {Vec3{1.0, 0.0, -tau * p.y}, Vec3{0.0, 1.0, tau * p.x}, Vec3{0.0, 0.0, 1.0}};
}

/// Connection on the canonical frame: nabla_{E_i} E_j, constant in tau.
inline FrameVector frame_connection(int i, int j, double tau) {
    // nabla_{E1}E2 =  tau E3   nabla_{E1}E3 = -tau E2
    // nabla_{E2}E1 = -tau E3   nabla_{E2}E3 =  tau E1
    // nabla_{E3}E1 = -tau E2   nabla_{E3}E2 =  tau E1
    static constexpr int kAxis[3][3] = {{-1, 2, 1}, {2, -1, 0}, {1, 0, -1}};
    static constexpr double kSign[3][3] = {{0, 1, -1}, {-1, 0, 1}, {-1, 1, 0}};
    FrameVector out;
    const int axis = kAxis[i][j];
    if (axis < 0)
        return out;
    const double v = kSign[i][j] * tau;
    if (axis == 0)
        out.c1 = v;
    else if (axis == 1)
        out.c2 = v;
    else
        out.c3 = v;
    return out;
}

/// Lie brackets of the frame: [E1,E2] = 2 tau E3, the rest vanish.
inline FrameVector frame_bracket(int i, int j, double tau) {
    FrameVector out;
    if (i == 0 && j == 1)
        out.c3 = 2.0 * tau;
    else if (i == 1 && j == 0)
        out.c3 = -2.0 * tau;
    return out;
}

namespace detail {

inline FrameVector covariant_on_frame(const FrameVector& w, int i, double tau) {
    // nabla_{E_i} (sum_j w_j E_j) for constant components w_j.
    FrameVector out;
    for (int j = 0; j < 3; ++j)
        out = out + w[j] * frame_connection(i, j, tau);
    return out;
}

}  // namespace detail

/// Curvature tensor R(E_i, E_j) E_k with the convention
/// R(X, Y) Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_{[X,Y]} Z.
/// The connection coefficients are constant on the frame, so the first two
/// terms reduce to compositions of the table.
inline FrameVector frame_curvature(int i, int j, int k, double tau) {
    const FrameVector a = detail::covariant_on_frame(frame_connection(j, k, tau), i, tau);
    const FrameVector b = detail::covariant_on_frame(frame_connection(i, k, tau), j, tau);
    const FrameVector br = frame_bracket(i, j, tau);
    FrameVector c;
    for (int l = 0; l < 3; ++l)
        c = c + br[l] * frame_connection(l, k, tau);
    return a - b - c;
}

/// <R(w, v) v, z> extended multilinearly from the frame table.
inline double curvature_pairing(const FrameVector& w, const FrameVector& v,
                                const FrameVector& z, double tau) {
    double out = 0.0;
    for (int i = 0; i < 3; ++i) {
        if (w[i] == 0.0)
            continue;
        for (int j = 0; j < 3; ++j) {
            if (v[j] == 0.0)
                continue;
            for (int k = 0; k < 3; ++k) {
                if (v[k] == 0.0)
                    continue;
                out += w[i] * v[j] * v[k] * frame_dot(frame_curvature(i, j, k, tau), z);
            }
        }
    }
    return out;
}

/// Ric(v) = sum_i <R(w_i, v) v, w_i> over an orthonormal completion {w_1, w_2}
/// of the unit vector v. The completion is built by Gram-Schmidt against a
/// fixed candidate pair, switching candidates when v is too close to the
/// first one (threshold 0.5 on the dot product).
inline double ricci(const FrameVector& v, const AmbientParams& params) {
    if (std::abs(v.norm() - 1.0) > 1e-10)
        throw InvalidArgument("ricci: v must be a unit vector (tolerance 1e-10)");
    const FrameVector cand1{1.0, 0.0, 0.0};
    const FrameVector cand2{0.0, 1.0, 0.0};
    const FrameVector first = std::abs(frame_dot(v, cand1)) < 0.5 ? cand1 : cand2;
    FrameVector w1 = first - frame_dot(first, v) * v;
    w1 = (1.0 / w1.norm()) * w1;
    // w2 = v x w1 in frame components (the frame is orthonormal and oriented).
    FrameVector w2{v.c2 * w1.c3 - v.c3 * w1.c2, v.c3 * w1.c1 - v.c1 * w1.c3,
                   v.c1 * w1.c2 - v.c2 * w1.c1};
    const double tau = params.tau;
    return curvature_pairing(w1, v, w1, tau) + curvature_pairing(w2, v, w2, tau);
}

/// Upward unit normal of the graph {z = u(x,y)} in frame components plus the
/// area element W. With alpha = tau y + u_x, beta = -tau x + u_y:
///   W^2 = 1 + alpha^2 + beta^2,  N = (-alpha/W, -beta/W, 1/W).
struct GraphNormal {
    FrameVector n;
    double w = 1.0;
};

inline GraphNormal graph_normal(const GraphJet& jet, const AmbientParams& params) {
    const double alpha = params.tau * jet.y + jet.ux;
    const double beta = -params.tau * jet.x + jet.uy;
    const double w = std::sqrt(1.0 + alpha * alpha + beta * beta);
    return {FrameVector{-alpha / w, -beta / w, 1.0 / w}, w};
}

/// Coordinate Christoffel symbols Gamma^k_{ij} at p obtained by transporting
/// the hard-coded frame table through the coordinate/frame change
///   d_x = E1 + tau y E3,  d_y = E2 - tau x E3,  d_z = E3.
inline std::array<std::array<std::array<double, 3>, 3>, 3>
coordinate_christoffels_from_table(Vec3 p, const AmbientParams& params) {
    const double tau = params.tau;
    // A[i][a]: frame components of d_i at p; dA[i][a][m]: d_m A[i][a].
    const double A[3][3] = {{1, 0, tau * p.y}, {0, 1, -tau * p.x}, {0, 0, 1}};
    double dA[3][3][3] = {};
    dA[0][2][1] = tau;   // d_y (tau y) in d_x's E3 component
    dA[1][2][0] = -tau;  // d_x (-tau x) in d_y's E3 component

    const auto frame = frame_at(p, params);
    std::array<std::array<std::array<double, 3>, 3>, 3> gamma{};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            // nabla_{d_i} d_j in frame components: Leibniz on the
            // position-dependent coefficients plus the frame table.
            FrameVector cov;
            for (int b = 0; b < 3; ++b) {
                const double leib = dA[j][b][i];
                FrameVector unit;
                if (b == 0)
                    unit.c1 = 1;
                else if (b == 1)
                    unit.c2 = 1;
                else
                    unit.c3 = 1;
                cov = cov + leib * unit;
                for (int a = 0; a < 3; ++a)
                    cov = cov + (A[i][a] * A[j][b]) * frame_connection(a, b, tau);
            }
            // Convert frame components back to coordinates.
            Vec3 coord = cov.c1 * frame[0] + cov.c2 * frame[1] + cov.c3 * frame[2];
            gamma[0][i][j] = coord.x;
            gamma[1][i][j] = coord.y;
            gamma[2][i][j] = coord.z;
        }
    }
    return gamma;
}

}  // namespace nil3

#endif  // NIL3_AMBIENT_HPP
