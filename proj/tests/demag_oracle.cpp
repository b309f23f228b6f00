#include "demag_oracle.hpp"

#include <cmath>
#include <vector>

namespace cmpkit::testing {

namespace {

// 8-point Gauss-Legendre nodes/weights on [-1, 1]
constexpr double kNodes[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                              -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                              0.7966664774136267,  0.9602898564975363};
constexpr double kWeights[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                0.2223810344533745, 0.1012285362903763};

struct Panel {
    double ci, cj, hi, hj;  // center and half sizes in the two face coordinates
};

// Field at r from the face x_b = side * a_b carrying charge density `side`.
std::array<double, 3> face_field(const SampleGeometry& geom, const Vec3& r, int axis_b,
                                 double side) {
    const int i = (axis_b + 1) % 3;
    const int j = (axis_b + 2) % 3;
    const Vec3& a = geom.half_dims_m;
    const double min_dim = std::min({a[0], a[1], a[2]});

    std::array<double, 3> field{};
    std::vector<Panel> stack{{0.0, 0.0, a[i], a[j]}};
    while (!stack.empty()) {
        const Panel p = stack.back();
        stack.pop_back();
        Vec3 center{};
        center[axis_b] = side * a[axis_b];
        center[i] = p.ci;
        center[j] = p.cj;
        const double dx = r[0] - center[0];
        const double dy = r[1] - center[1];
        const double dz = r[2] - center[2];
        const double dist = std::sqrt(dx * dx + dy * dy + dz * dz);
        const double diam = 2.0 * std::hypot(p.hi, p.hj);
        if (diam > 0.5 * dist && diam > 1e-7 * min_dim) {
            for (double si : {-0.5, 0.5}) {
                for (double sj : {-0.5, 0.5}) {
                    stack.push_back(
                        {p.ci + si * p.hi, p.cj + sj * p.hj, 0.5 * p.hi, 0.5 * p.hj});
                }
            }
            continue;
        }
        for (int gi = 0; gi < 8; ++gi) {
            for (int gj = 0; gj < 8; ++gj) {
                Vec3 q{};
                q[axis_b] = side * a[axis_b];
                q[i] = p.ci + kNodes[gi] * p.hi;
                q[j] = p.cj + kNodes[gj] * p.hj;
                const double ex = r[0] - q[0];
                const double ey = r[1] - q[1];
                const double ez = r[2] - q[2];
                const double rr = std::sqrt(ex * ex + ey * ey + ez * ez);
                const double w = side * kWeights[gi] * kWeights[gj] * p.hi * p.hj / (rr * rr * rr);
                field[0] += w * ex;
                field[1] += w * ey;
                field[2] += w * ez;
            }
        }
    }
    for (double& f : field) f /= 4.0 * M_PI;
    return field;
}

} // namespace

std::array<std::array<double, 3>, 3> demag_oracle(const SampleGeometry& geom,
                                                  const Vec3& point_m) {
    std::array<std::array<double, 3>, 3> n{};
    for (int b = 0; b < 3; ++b) {
        const auto plus = face_field(geom, point_m, b, +1.0);
        const auto minus = face_field(geom, point_m, b, -1.0);
        for (int row = 0; row < 3; ++row) {
            n[row][b] = -(plus[row] + minus[row]);
        }
    }
    return n;
}

} // namespace cmpkit::testing
