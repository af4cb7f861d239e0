// SPDX-License-Identifier: Apache-2.0
#include "gscm/geometry.hpp"

#include <algorithm>
#include <stdexcept>

namespace gscm {

namespace {
constexpr double kPoleEps = 1e-12;
}

double wrap_angle(double a)
{
    if (!std::isfinite(a))
        throw std::invalid_argument("wrap_angle: non-finite angle");
    a = std::fmod(a, 2 * kPi);
    if (a <= -kPi)
        a += 2 * kPi;
    else if (a > kPi)
        a -= 2 * kPi;
    return a;
}

Vec3 Vec3::normalized() const
{
    const double n = norm();
    if (n == 0)
        throw std::invalid_argument("Vec3::normalized: zero vector");
    return {x / n, y / n, z / n};
}

Direction::Direction(double th, double ph)
{
    if (!std::isfinite(th) || !std::isfinite(ph))
        throw std::invalid_argument("Direction: non-finite angle");
    if (th < 0 || th > kPi)
        throw std::invalid_argument("Direction: theta outside [0, pi]");
    theta = th;
    phi = wrap_angle(ph);
}

Orientation::Orientation(double a, double b, double g)
    : alpha(wrap_angle(a)), beta(wrap_angle(b)), gamma(wrap_angle(g))
{
}

Mat3 rotation_matrix(const Orientation& o)
{
    const double ca = std::cos(o.alpha), sa = std::sin(o.alpha);
    const double cb = std::cos(o.beta), sb = std::sin(o.beta);
    const double cg = std::cos(o.gamma), sg = std::sin(o.gamma);
    // Rz(alpha) Ry(beta) Rx(gamma)
    return Mat3{{{ca * cb, ca * sb * sg - sa * cg, ca * sb * cg + sa * sg},
                 {sa * cb, sa * sb * sg + ca * cg, sa * sb * cg - ca * sg},
                 {-sb, cb * sg, cb * cg}}};
}

Vec3 mat_apply(const Mat3& m, const Vec3& v)
{
    return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
            m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
            m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
}

Vec3 mat_apply_transpose(const Mat3& m, const Vec3& v)
{
    return {m[0][0] * v.x + m[1][0] * v.y + m[2][0] * v.z,
            m[0][1] * v.x + m[1][1] * v.y + m[2][1] * v.z,
            m[0][2] * v.x + m[1][2] * v.y + m[2][2] * v.z};
}

Vec3 spherical_unit_vector(const Direction& d)
{
    const double st = std::sin(d.theta);
    return {st * std::cos(d.phi), st * std::sin(d.phi), std::cos(d.theta)};
}

Vec3 theta_hat(const Direction& d)
{
    const double ct = std::cos(d.theta);
    return {ct * std::cos(d.phi), ct * std::sin(d.phi), -std::sin(d.theta)};
}

Vec3 phi_hat(const Direction& d)
{
    return {-std::sin(d.phi), std::cos(d.phi), 0.0};
}

Direction direction_of(const Vec3& v)
{
    const Vec3 u = v.normalized();
    const double theta = std::acos(std::clamp(u.z, -1.0, 1.0));
    const double sxy = std::hypot(u.x, u.y);
    Direction d;
    d.theta = theta;
    d.phi = (sxy < kPoleEps) ? 0.0 : wrap_angle(std::atan2(u.y, u.x));
    return d;
}

Direction gcs_to_lcs(const Orientation& o, const Direction& d_gcs)
{
    return direction_of(mat_apply_transpose(rotation_matrix(o), spherical_unit_vector(d_gcs)));
}

Direction lcs_to_gcs(const Orientation& o, const Direction& d_lcs)
{
    return direction_of(mat_apply(rotation_matrix(o), spherical_unit_vector(d_lcs)));
}

double polarization_rotation_angle(const Orientation& o, const Direction& d_gcs)
{
    const Mat3 r = rotation_matrix(o);
    const Direction d_lcs = gcs_to_lcs(o, d_gcs);
    // Rotate the local theta-hat basis vector to the global frame and read off
    // its components in the global (theta-hat, phi-hat) basis at d_gcs.
    const Vec3 tl = mat_apply(r, theta_hat(d_lcs));
    const double c = tl.dot(theta_hat(d_gcs));
    const double s = tl.dot(phi_hat(d_gcs));
    return std::atan2(s, c);
}

Orientation orientation_from_matrix(const Mat3& r)
{
    const double beta = -std::asin(std::clamp(r[2][0], -1.0, 1.0));
    double alpha, gamma;
    if (std::abs(r[2][0]) < 1.0 - 1e-12) {
        alpha = std::atan2(r[1][0], r[0][0]);
        gamma = std::atan2(r[2][1], r[2][2]);
    } else {
        // Gimbal lock: only alpha +/- gamma is determined; pin gamma = 0.
        alpha = std::atan2(-r[0][1], r[1][1]);
        gamma = 0.0;
    }
    return Orientation(alpha, beta, gamma);
}

Orientation compose(const Orientation& outer, const Orientation& inner)
{
    const Mat3 a = rotation_matrix(outer);
    const Mat3 b = rotation_matrix(inner);
    Mat3 c{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
    return orientation_from_matrix(c);
}

Orientation orientation_toward(const Vec3& boresight)
{
    const Vec3 b = boresight.normalized();
    const double alpha = (std::hypot(b.x, b.y) < kPoleEps) ? 0.0 : std::atan2(b.y, b.x);
    const double beta = std::atan2(-b.z, std::hypot(b.x, b.y));
    return Orientation(alpha, beta, 0.0);
}

} // namespace gscm
