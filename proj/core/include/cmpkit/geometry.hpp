#pragma once

#include <array>
#include <optional>

namespace cmpkit {

using Vec3 = std::array<double, 3>;

enum class Axis { X = 0, Y = 1, Z = 2 };

/// Rectangular-prism magnetic sample, centered at the origin with faces at
/// +-half_dims_m along each axis. The static bias field lies along bias_axis.
struct SampleGeometry {
    Vec3 half_dims_m{};           // a_x, a_y, a_z
    double saturation_t = 0.176;  // mu0*Ms. Room-temperature YIG value; the
                                  // spin-density route (n_s * 5 mu_B) gives
                                  // ~0.246 T instead, so this stays configurable.
    Axis bias_axis = Axis::Z;

    double volume_m3() const {
        return 8.0 * half_dims_m[0] * half_dims_m[1] * half_dims_m[2];
    }

    /// Throws InvalidArgument unless all half dims > 0 and saturation >= 0.
    void validate() const;

    /// The 3.82 x 6.09 x 0.61 mm^3 YIG slab: thickness along x (RF field axis),
    /// long edge along y, bias along z.
    static SampleGeometry yig_slab();
};

/// Dimensionless demagnetizing tensor, either at a point or volume-averaged
/// (eval_point_m empty).
struct DemagTensor {
    std::array<std::array<double, 3>, 3> n{};
    std::optional<Vec3> eval_point_m;

    double operator()(int row, int col) const { return n[row][col]; }
    double nxx() const { return n[0][0]; }
    double nyy() const { return n[1][1]; }
    double nzz() const { return n[2][2]; }
    double nxy() const { return n[0][1]; }
    double nyz() const { return n[1][2]; }
    double nzx() const { return n[2][0]; }
    double diag(Axis a) const { return n[static_cast<int>(a)][static_cast<int>(a)]; }
    double trace() const { return n[0][0] + n[1][1] + n[2][2]; }

    /// Trace == 1 (1e-9), diagonal in [0,1], symmetric (1e-12).
    void validate() const;

    /// Tensor of a sphere (diag 1/3); handy reference shape.
    static DemagTensor sphere();
    /// Diagonal tensor from explicit components (off-diagonals zero).
    static DemagTensor diagonal(double nxx, double nyy, double nzz);
};

/// Diagonal components (N_xx, N_yy, N_zz) at an interior point: eight-term
/// arccotangent sum per axis with cyclic (i, j, k) assignment.
/// Throws DomainError when the point is on or outside the boundary
/// (margin 1e-9 * min half dim; the sum is singular on edges).
std::array<double, 3> demag_diag(const SampleGeometry& geom, const Vec3& point_m);

/// Off-diagonal components (N_xy, N_yz, N_zx) at an interior point
/// (log-ratio form). Same domain restrictions as demag_diag.
std::array<double, 3> demag_offdiag(const SampleGeometry& geom, const Vec3& point_m);

/// Full symmetric tensor at one point.
DemagTensor demag_at(const SampleGeometry& geom, const Vec3& point_m);

/// Tensor evaluated at the prism center (off-diagonals vanish there).
DemagTensor demag_center(const SampleGeometry& geom);

/// Midpoint-rule volume average over a grid_resolution^3 interior grid.
/// grid_resolution >= 2 required.
DemagTensor demag_volume_average(const SampleGeometry& geom, int grid_resolution);

} // namespace cmpkit
