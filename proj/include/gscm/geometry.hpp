// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>

namespace gscm {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSpeedOfLight = 299792458.0; // m/s

inline double deg2rad(double d) { return d * kPi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / kPi; }

/// Wraps an angle to (-pi, pi].
double wrap_angle(double a);

struct Vec3
{
    double x = 0, y = 0, z = 0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const { return std::sqrt(dot(*this)); }
    Vec3 normalized() const;
};

/// Zenith/azimuth direction. theta in [0, pi] from +z, phi in (-pi, pi] from +x.
struct Direction
{
    double theta = 0;
    double phi = 0;

    Direction() = default;
    Direction(double th, double ph);
};

/// Device or sector orientation: bearing alpha (about z), downtilt beta (about y),
/// slant gamma (about x). Intrinsic z-y-x composition per TR 38.901 Section 7.1.
struct Orientation
{
    double alpha = 0;
    double beta = 0;
    double gamma = 0;

    Orientation() = default;
    Orientation(double a, double b, double g);
};

using Mat3 = std::array<std::array<double, 3>, 3>;

/// R = Rz(alpha) * Ry(beta) * Rx(gamma); maps local-frame vectors to the global frame.
Mat3 rotation_matrix(const Orientation& o);

Vec3 mat_apply(const Mat3& m, const Vec3& v);
Vec3 mat_apply_transpose(const Mat3& m, const Vec3& v);

/// (sin t cos p, sin t sin p, cos t)
Vec3 spherical_unit_vector(const Direction& d);

/// Zenith unit vector theta-hat at direction d.
Vec3 theta_hat(const Direction& d);
/// Azimuth unit vector phi-hat at direction d.
Vec3 phi_hat(const Direction& d);

/// Direction of a (non-zero) Cartesian vector. At the poles phi is defined as 0.
Direction direction_of(const Vec3& v);

/// Global direction -> direction seen in the local frame with orientation o.
Direction gcs_to_lcs(const Orientation& o, const Direction& d_gcs);
/// Local direction -> global frame.
Direction lcs_to_gcs(const Orientation& o, const Direction& d_lcs);

/// Rotation angle psi of the (theta-hat, phi-hat) polarization basis under the
/// frame change, so that (F_theta, F_phi)_gcs = R(psi) (F_theta, F_phi)_lcs.
double polarization_rotation_angle(const Orientation& o, const Direction& d_gcs);

/// Euler angles of a rotation matrix (inverse of rotation_matrix).
Orientation orientation_from_matrix(const Mat3& r);

/// Orientation whose combined rotation is R(outer) * R(inner).
Orientation compose(const Orientation& outer, const Orientation& inner);

/// Orientation with the local +x axis (pattern boresight, theta=90, phi=0 in the
/// local frame) pointing along `boresight`, with zero slant.
Orientation orientation_toward(const Vec3& boresight);

} // namespace gscm
