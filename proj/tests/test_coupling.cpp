#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>

#include <doctest.h>

#include "cmpkit/coupling.hpp"
#include "cmpkit/errors.hpp"

using namespace cmpkit;

namespace {

FieldMap uniform_map(int nx, int ny, int nz, double hx, double hy, double hz,
                     int sample_every = 1) {
    FieldMap m;
    m.spacing_m = {1e-4, 1e-4, 1e-4};
    m.shape = {nx, ny, nz};
    const std::size_t n = static_cast<std::size_t>(nx) * ny * nz;
    m.hx.assign(n, hx);
    m.hy.assign(n, hy);
    m.hz.assign(n, hz);
    m.in_sample.assign(n, 0);
    for (std::size_t i = 0; i < n; i += sample_every) m.in_sample[i] = 1;
    return m;
}

} // namespace

TEST_SUITE("coupling_filling") {

TEST_CASE("uniform transverse field filling the cavity gives eta = 1") {
    const auto m = uniform_map(4, 4, 4, 1.0, 0.0, 0.0);
    CHECK(filling_factor(m, Axis::Z) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("field along the bias axis gives eta = 0") {
    const auto m = uniform_map(4, 4, 4, 0.0, 0.0, 2.5);
    CHECK(filling_factor(m, Axis::Z) == doctest::Approx(0.0));
    // and the same map read with bias x sees a transverse field
    CHECK(filling_factor(m, Axis::X) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("half-filled sample with a uniform global field gives 1/sqrt(2)") {
    auto m = uniform_map(4, 4, 4, 3.0, 0.0, 0.0, 2);  // every other cell in-sample
    CHECK(filling_factor(m, Axis::Z) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));

    // confining the same field to the sample cells restores eta = 1
    for (std::size_t i = 0; i < m.cell_count(); ++i) {
        if (!m.in_sample[i]) m.hx[i] = 0.0;
    }
    CHECK(filling_factor(m, Axis::Z) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("eta is invariant under global rescaling") {
    std::mt19937_64 rng(77);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto m = uniform_map(5, 3, 4, 0.0, 0.0, 0.0, 3);
    for (std::size_t i = 0; i < m.cell_count(); ++i) {
        m.hx[i] = gauss(rng);
        m.hy[i] = gauss(rng);
        m.hz[i] = gauss(rng);
    }
    const double base = filling_factor(m, Axis::Z);
    for (double scale : {1e-6, 1e6}) {
        FieldMap s = m;
        for (std::size_t i = 0; i < s.cell_count(); ++i) {
            s.hx[i] *= scale;
            s.hy[i] *= scale;
            s.hz[i] *= scale;
        }
        CHECK(filling_factor(s, Axis::Z) == doctest::Approx(base).epsilon(1e-12));
    }
}

TEST_CASE("eta never exceeds 1 on random maps") {
    std::mt19937_64 rng(123);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_int_distribution<int> dim(1, 6);
    std::uniform_real_distribution<double> mask(0.0, 1.0);
    for (int t = 0; t < 200; ++t) {
        FieldMap m;
        m.spacing_m = {1e-4, 2e-4, 5e-5};
        m.shape = {dim(rng), dim(rng), dim(rng)};
        const std::size_t n = m.cell_count();
        bool any = false;
        for (std::size_t i = 0; i < n; ++i) {
            m.hx.push_back(gauss(rng));
            m.hy.push_back(gauss(rng));
            m.hz.push_back(gauss(rng));
            const bool in = mask(rng) < 0.4;
            m.in_sample.push_back(in);
            any = any || in;
        }
        if (!any) m.in_sample[0] = 1;
        const double eta = filling_factor(m, Axis::Z);
        CHECK(eta >= 0.0);
        CHECK(eta <= 1.0);
    }
}

TEST_CASE("all-zero field map raises the undefined-eta error") {
    const auto m = uniform_map(3, 3, 3, 0.0, 0.0, 0.0);
    CHECK_THROWS_AS((void)filling_factor(m, Axis::Z), UndefinedFillingError);
}

TEST_CASE("coupling strength basics") {
    CHECK(coupling_strength_ghz(0.0, 5.0) == doctest::Approx(0.0));
    // sqrt(f) scaling
    const double g1 = coupling_strength_ghz(0.7, 2.0);
    const double g4 = coupling_strength_ghz(0.7, 8.0);
    CHECK(g4 / g1 == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("g/omega = 1 thresholds from the material constants") {
    // eta = 1: 1.72 GHz; eta = 0.79: 1.07 GHz (both within 2%)
    const double f1 = dsc_threshold_frequency_ghz(1.0);
    CHECK(std::abs(f1 - 1.72) / 1.72 < 0.02);
    const double f079 = dsc_threshold_frequency_ghz(0.79);
    CHECK(std::abs(f079 - 1.07) / 1.07 < 0.02);

    // thresholds are fixed points of g(f) = f
    CHECK(coupling_strength_ghz(1.0, f1) == doctest::Approx(f1).epsilon(1e-10));
    CHECK(coupling_strength_ghz(0.79, f079) == doctest::Approx(f079).epsilon(1e-10));
}

TEST_CASE("regime classification with exact boundaries") {
    CHECK(classify_regime(0.05) == CouplingRegime::SC);
    CHECK(classify_regime(0.59) == CouplingRegime::USC);
    CHECK(classify_regime(1.2) == CouplingRegime::DSC);
    CHECK(classify_regime(0.1) == CouplingRegime::USC);
    CHECK(classify_regime(1.0) == CouplingRegime::DSC);
    CHECK(classify_regime(std::nextafter(0.1, 0.0)) == CouplingRegime::SC);
    CHECK(classify_regime(std::nextafter(1.0, 0.0)) == CouplingRegime::USC);
    CHECK_THROWS_AS((void)classify_regime(-0.1), InvalidArgument);
}

TEST_CASE("table consistency columns") {
    const auto a = table_consistency(2.68, 7.65);  // CAV01 row a
    CHECK(a.g_over_omega == doctest::Approx(0.350).epsilon(2e-3));
    CHECK(a.g_sq_over_omega_ghz == doctest::Approx(0.939).epsilon(2e-3));
    const auto d = table_consistency(2.42, 7.63);  // CAV02 row d
    CHECK(d.g_over_omega == doctest::Approx(0.317).epsilon(2e-3));
    CHECK(d.g_sq_over_omega_ghz == doctest::Approx(0.768).epsilon(2e-3));
    const auto z = table_consistency(0.0, 5.0);
    CHECK(z.g_over_omega == 0.0);
    CHECK(z.g_sq_over_omega_ghz == 0.0);
}

TEST_CASE("field map JSON round trip") {
    auto m = uniform_map(3, 2, 2, 1.0, -0.5, 0.25, 2);
    m.hx[3] = 42.0;
    const auto path = std::filesystem::temp_directory_path() / "cmpkit_fieldmap_test.json";
    m.save_json(path.string());
    const auto back = FieldMap::load_json(path.string());
    CHECK(back.shape == m.shape);
    CHECK(back.hx == m.hx);
    CHECK(back.hy == m.hy);
    CHECK(back.hz == m.hz);
    CHECK(back.in_sample == m.in_sample);
    CHECK(filling_factor(back, Axis::Z) == doctest::Approx(filling_factor(m, Axis::Z)));
    std::filesystem::remove(path);
}

TEST_CASE("field map validation") {
    auto m = uniform_map(2, 2, 2, 1.0, 0.0, 0.0);
    m.hx[1] = std::nan("");
    CHECK_THROWS_AS(m.validate(), InvalidArgument);
    m = uniform_map(2, 2, 2, 1.0, 0.0, 0.0);
    m.in_sample.assign(m.cell_count(), 0);
    CHECK_THROWS_AS(m.validate(), InvalidArgument);
    m = uniform_map(2, 2, 2, 1.0, 0.0, 0.0);
    m.hz.pop_back();
    CHECK_THROWS_AS(m.validate(), InvalidArgument);
}

TEST_CASE("coupling_from_map composes eta, g and the regime") {
    const auto m = uniform_map(4, 4, 4, 1.0, 0.0, 0.0);
    const auto r = coupling_from_map(m, Axis::Z, 1.72);
    CHECK(r.eta == doctest::Approx(1.0));
    CHECK(r.g_over_omega == doctest::Approx(1.0).epsilon(0.01));
    CHECK(r.regime == CouplingRegime::DSC);
    const auto weak = coupling_from_map(m, Axis::Z, 300.0);
    CHECK(weak.regime == CouplingRegime::SC);
}

TEST_CASE("implied saturation from the spin density is about 0.246 T") {
    PhysicalConstants c;
    CHECK(c.implied_saturation_t() == doctest::Approx(0.246).epsilon(2e-3));
}

} // TEST_SUITE
