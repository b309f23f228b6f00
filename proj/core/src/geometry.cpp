#include "cmpkit/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cmpkit/errors.hpp"

namespace cmpkit {

namespace {

// arccot with range (0, pi): atan(1/v) for v > 0, pi + atan(1/v) for v < 0.
// atan2(1, v) realizes exactly that branch and handles v = 0.
double acot(double v) { return std::atan2(1.0, v); }

void require_interior(const SampleGeometry& geom, const Vec3& p) {
    const double margin =
        1e-9 * std::min({geom.half_dims_m[0], geom.half_dims_m[1], geom.half_dims_m[2]});
    for (int i = 0; i < 3; ++i) {
        if (geom.half_dims_m[i] - std::abs(p[i]) <= margin) {
            throw DomainError("demag evaluation point on or outside the prism boundary");
        }
    }
}

} // namespace

void SampleGeometry::validate() const {
    for (double a : half_dims_m) {
        if (!(a > 0.0) || !std::isfinite(a)) {
            throw InvalidArgument("sample half dimensions must be strictly positive");
        }
    }
    if (!(saturation_t >= 0.0) || !std::isfinite(saturation_t)) {
        throw InvalidArgument("saturation field must be non-negative");
    }
}

SampleGeometry SampleGeometry::yig_slab() {
    SampleGeometry g;
    g.half_dims_m = {0.305e-3, 3.045e-3, 1.91e-3};
    g.saturation_t = 0.176;
    g.bias_axis = Axis::Z;
    return g;
}

void DemagTensor::validate() const {
    if (std::abs(trace() - 1.0) > 1e-9) {
        throw InvalidArgument("demag tensor trace must equal 1");
    }
    for (int i = 0; i < 3; ++i) {
        if (n[i][i] < -1e-12 || n[i][i] > 1.0 + 1e-12) {
            throw InvalidArgument("demag diagonal component outside [0, 1]");
        }
        for (int j = i + 1; j < 3; ++j) {
            if (std::abs(n[i][j] - n[j][i]) > 1e-12) {
                throw InvalidArgument("demag tensor must be symmetric");
            }
        }
    }
}

DemagTensor DemagTensor::sphere() { return diagonal(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0); }

DemagTensor DemagTensor::diagonal(double nxx, double nyy, double nzz) {
    DemagTensor t;
    t.n[0][0] = nxx;
    t.n[1][1] = nyy;
    t.n[2][2] = nzz;
    return t;
}

std::array<double, 3> demag_diag(const SampleGeometry& geom, const Vec3& point_m) {
    geom.validate();
    require_interior(geom, point_m);
    const Vec3& a = geom.half_dims_m;

    std::array<double, 3> out{};
    for (int k = 0; k < 3; ++k) {
        const int i = (k + 1) % 3;
        const int j = (k + 2) % 3;
        double sum = 0.0;
        for (int si = -1; si <= 1; si += 2) {
            for (int sj = -1; sj <= 1; sj += 2) {
                for (int sk = -1; sk <= 1; sk += 2) {
                    const double di = a[i] - si * point_m[i];
                    const double dj = a[j] - sj * point_m[j];
                    const double dk = a[k] - sk * point_m[k];
                    const double r = std::sqrt(di * di + dj * dj + dk * dk);
                    sum += acot(r * dk / (di * dj));
                }
            }
        }
        out[k] = sum / (4.0 * M_PI);
    }
    return out;
}

std::array<double, 3> demag_offdiag(const SampleGeometry& geom, const Vec3& point_m) {
    geom.validate();
    require_interior(geom, point_m);
    const Vec3& a = geom.half_dims_m;

    // G(r | s_i a_i, s_j a_j, s_k a_k) = (s_j a_j - x_j) + |s a - x|
    auto g = [&](int i, int j, int k, int si, int sj, int sk) {
        const double di = si * a[i] - point_m[i];
        const double dj = sj * a[j] - point_m[j];
        const double dk = sk * a[k] - point_m[k];
        return dj + std::sqrt(di * di + dj * dj + dk * dk);
    };

    // Component N_ik with j the remaining axis: (N_xy, N_yz, N_zx).
    constexpr int pairs[3][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}};  // (i, k, j)
    std::array<double, 3> out{};
    for (int idx = 0; idx < 3; ++idx) {
        const int i = pairs[idx][0];
        const int k = pairs[idx][1];
        const int j = pairs[idx][2];
        const double num = g(i, j, k, 1, 1, 1) * g(i, j, k, -1, -1, 1) *
                           g(i, j, k, -1, 1, -1) * g(i, j, k, 1, -1, -1);
        const double den = g(i, j, k, -1, 1, 1) * g(i, j, k, 1, -1, 1) *
                           g(i, j, k, 1, 1, -1) * g(i, j, k, -1, -1, -1);
        out[idx] = -std::log(num / den) / (4.0 * M_PI);
    }
    return out;
}

DemagTensor demag_at(const SampleGeometry& geom, const Vec3& point_m) {
    const auto d = demag_diag(geom, point_m);
    const auto o = demag_offdiag(geom, point_m);
    DemagTensor t;
    t.n = {{{d[0], o[0], o[2]},
            {o[0], d[1], o[1]},
            {o[2], o[1], d[2]}}};
    t.eval_point_m = point_m;
    return t;
}

DemagTensor demag_center(const SampleGeometry& geom) {
    return demag_at(geom, Vec3{0.0, 0.0, 0.0});
}

DemagTensor demag_volume_average(const SampleGeometry& geom, int grid_resolution) {
    geom.validate();
    if (grid_resolution < 2) {
        throw InvalidArgument("volume-average grid resolution must be >= 2");
    }
    const int n = grid_resolution;
    std::array<std::array<double, 3>, 3> acc{};
    for (int iz = 0; iz < n; ++iz) {
        for (int iy = 0; iy < n; ++iy) {
            for (int ix = 0; ix < n; ++ix) {
                const Vec3 p = {
                    geom.half_dims_m[0] * ((2.0 * ix + 1.0) / n - 1.0),
                    geom.half_dims_m[1] * ((2.0 * iy + 1.0) / n - 1.0),
                    geom.half_dims_m[2] * ((2.0 * iz + 1.0) / n - 1.0),
                };
                const DemagTensor t = demag_at(geom, p);
                for (int r = 0; r < 3; ++r)
                    for (int c = 0; c < 3; ++c) acc[r][c] += t.n[r][c];
            }
        }
    }
    const double inv = 1.0 / (static_cast<double>(n) * n * n);
    DemagTensor t;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) t.n[r][c] = acc[r][c] * inv;
    t.eval_point_m.reset();  // volume-averaged marker
    return t;
}

} // namespace cmpkit
