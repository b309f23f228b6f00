#include <algorithm>
#include <cmath>
#include <random>

#include <doctest.h>

#include "cmpkit/errors.hpp"
#include "cmpkit/fit.hpp"

using namespace cmpkit;

namespace {

DispersionModelParams cav01e_model() {
    DispersionModelParams p;
    p.model = DispersionModel::ShiftedDicke;
    p.cavity_freq_ghz = 4.46;
    p.coupling_ghz = 2.03;
    p.magnon_shift_ghz = 2.39;
    return p;
}

// Branch points over a symmetric saturated sweep, optionally with
// multiplicative Gaussian noise and a dark line.
BranchData make_data(const DispersionModelParams& model, const FmrParams& fmr,
                     double noise_rel = 0.0, std::uint64_t seed = 0, bool dark = false,
                     double dark_freq = 1.38, int n_fields = 25) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    BranchData data;
    for (int i = 0; i < n_fields; ++i) {
        const double b = 0.10 + (0.27 - 0.10) * i / (n_fields - 1);
        for (double field : {b, -b}) {
            const double wm = fmr_frequency_ghz(field, fmr);
            const auto bp = branches(model, wm);
            const double nl = noise_rel > 0.0 ? 1.0 + noise_rel * gauss(rng) : 1.0;
            const double nu = noise_rel > 0.0 ? 1.0 + noise_rel * gauss(rng) : 1.0;
            data.points.push_back({field, bp.lower_ghz * nl, BranchLabel::Lower});
            data.points.push_back({field, bp.upper_ghz * nu, BranchLabel::Upper});
            if (dark) {
                const double nd = noise_rel > 0.0 ? 1.0 + noise_rel * gauss(rng) : 1.0;
                data.points.push_back({field, dark_freq * nd, BranchLabel::Dark});
            }
        }
    }
    return data;
}

FitProblem cav01e_problem(BranchData data) {
    FitProblem prob;
    prob.data = std::move(data);
    prob.model = DispersionModel::ShiftedDicke;
    prob.fmr = FmrParams::yig_slab_default();
    return prob;
}

} // namespace

TEST_SUITE("branch_fit") {

TEST_CASE("noiseless round trip recovers the generating parameters to 1e-6") {
    const auto model = cav01e_model();
    const auto fmr = FmrParams::yig_slab_default();
    auto prob = cav01e_problem(symmetrize(make_data(model, fmr)));
    const auto res = fit(prob);
    CHECK(res.converged);
    CHECK(std::abs(res.params.f_bm_ghz - 4.46) / 4.46 < 1e-6);
    CHECK(std::abs(res.params.g_ghz - 2.03) / 2.03 < 1e-6);
    CHECK(std::abs(res.params.delta_m_ghz - 2.39) / 2.39 < 1e-6);
    CHECK(res.residual_rms_ghz < 1e-7);
}

TEST_CASE("noisy recovery stays within a few percent (smoke version)") {
    const auto model = cav01e_model();
    const auto fmr = FmrParams::yig_slab_default();
    for (std::uint64_t seed : {1ull, 2ull, 3ull, 4ull, 5ull}) {
        auto prob = cav01e_problem(symmetrize(make_data(model, fmr, 0.005, seed)));
        const auto res = fit(prob);
        CHECK(res.converged);
        CHECK(std::abs(res.params.f_bm_ghz - 4.46) / 4.46 < 0.02);
        CHECK(std::abs(res.params.g_ghz - 2.03) / 2.03 < 0.02);
        CHECK(std::abs(res.params.delta_m_ghz - 2.39) / 2.39 < 0.02);
    }
}

TEST_CASE("fixing f_bm leaves it untouched and cannot beat the free fit") {
    const auto model = cav01e_model();
    const auto fmr = FmrParams::yig_slab_default();
    const auto data = symmetrize(make_data(model, fmr, 0.005, 99));

    auto free_prob = cav01e_problem(data);
    const auto free_res = fit(free_prob);

    auto fixed_prob = cav01e_problem(data);
    fixed_prob.fixed = {"f_bm"};
    FitParameters guess = initial_guess(data);
    guess.f_bm_ghz = 4.40;  // held value, deliberately off
    fixed_prob.guess = guess;
    const auto fixed_res = fit(fixed_prob);

    CHECK(fixed_res.params.f_bm_ghz == doctest::Approx(4.40));
    CHECK(fixed_res.stderrs.f_bm_ghz == 0.0);
    CHECK(fixed_res.residual_rms_ghz >= free_res.residual_rms_ghz);
    CHECK(std::find(fixed_res.free_names.begin(), fixed_res.free_names.end(), "f_bm") ==
          fixed_res.free_names.end());
}

TEST_CASE("symmetrize folds fields and keeps duplicates") {
    BranchData d;
    d.points = {{0.1, 3.0, BranchLabel::Lower}, {-0.1, 3.0, BranchLabel::Lower}};
    const auto s = symmetrize(d);
    REQUIRE(s.points.size() == 2);
    CHECK(s.points[0].field_t == doctest::Approx(0.1));
    CHECK(s.points[1].field_t == doctest::Approx(0.1));

    BranchData pos;
    pos.points = {{0.2, 5.0, BranchLabel::Upper}};
    const auto same = symmetrize(pos);
    CHECK(same.points[0].field_t == doctest::Approx(0.2));
}

TEST_CASE("mixed-sign data tightens the standard errors") {
    const auto model = cav01e_model();
    const auto fmr = FmrParams::yig_slab_default();
    // one-sided half: 25 fields; the symmetric set doubles the count
    BranchData sym = symmetrize(make_data(model, fmr, 0.005, 12345));
    BranchData half;
    for (const auto& p : make_data(model, fmr, 0.005, 12345).points) {
        if (p.field_t > 0.0) half.points.push_back(p);
    }
    auto prob_sym = cav01e_problem(sym);
    auto prob_half = cav01e_problem(half);
    const auto res_sym = fit(prob_sym);
    const auto res_half = fit(prob_half);
    CHECK(res_sym.stderrs.f_bm_ghz < res_half.stderrs.f_bm_ghz);
    CHECK(res_sym.stderrs.g_ghz < res_half.stderrs.g_ghz);
    CHECK(res_sym.stderrs.delta_m_ghz < res_half.stderrs.delta_m_ghz);
}

TEST_CASE("initial guess lands near the truth and converges") {
    const auto model = cav01e_model();
    const auto fmr = FmrParams::yig_slab_default();
    const auto data = symmetrize(make_data(model, fmr));
    const auto guess = initial_guess(data);
    CHECK(std::abs(guess.f_bm_ghz - 4.46) / 4.46 < 0.30);
    CHECK(std::abs(guess.g_ghz - 2.03) / 2.03 < 0.30);
    auto prob = cav01e_problem(data);
    prob.guess = guess;
    CHECK(fit(prob).converged);
}

TEST_CASE("initial guess preconditions") {
    SUBCASE("single point cannot seed a guess") {
        BranchData d;
        d.points = {{0.1, 3.0, BranchLabel::Lower}};
        CHECK_THROWS_AS((void)initial_guess(d), InvalidArgument);
    }
    SUBCASE("dark-only data demands an explicit guess") {
        BranchData d;
        d.points = {{0.1, 1.4, BranchLabel::Dark}, {0.2, 1.4, BranchLabel::Dark}};
        CHECK_THROWS_AS((void)initial_guess(d), InvalidArgument);
    }
}

TEST_CASE("objective is non-increasing across accepted iterations") {
    const auto model = cav01e_model();
    const auto fmr = FmrParams::yig_slab_default();
    auto prob = cav01e_problem(symmetrize(make_data(model, fmr, 0.005, 7)));
    const auto res = fit(prob);
    REQUIRE(res.objective_trace.size() > 1);
    for (std::size_t i = 1; i < res.objective_trace.size(); ++i) {
        CHECK(res.objective_trace[i] <= res.objective_trace[i - 1]);
    }
}

TEST_CASE("fit result is independent of data-point order") {
    const auto model = cav01e_model();
    const auto fmr = FmrParams::yig_slab_default();
    const auto data = symmetrize(make_data(model, fmr, 0.005, 31));
    auto prob = cav01e_problem(data);
    const auto a = fit(prob);

    BranchData shuffled = data;
    std::mt19937_64 rng(555);
    std::shuffle(shuffled.points.begin(), shuffled.points.end(), rng);
    auto prob2 = cav01e_problem(shuffled);
    const auto b = fit(prob2);

    CHECK(a.params.f_bm_ghz == b.params.f_bm_ghz);
    CHECK(a.params.g_ghz == b.params.g_ghz);
    CHECK(a.params.delta_m_ghz == b.params.delta_m_ghz);
    CHECK(a.iterations == b.iterations);
}

TEST_CASE("a zero-shift dataset fits delta_m near zero") {
    DispersionModelParams model = cav01e_model();
    model.magnon_shift_ghz = 0.0;
    const auto fmr = FmrParams::yig_slab_default();
    auto prob = cav01e_problem(symmetrize(make_data(model, fmr, 0.002, 41)));
    const auto res = fit(prob);
    CHECK(res.converged);
    // within a few standard errors of zero
    CHECK(res.params.delta_m_ghz <= 4.0 * std::max(res.stderrs.delta_m_ghz, 1e-3));
}

TEST_CASE("homogeneity: scaling data and gyro scales the fitted parameters") {
    const auto model = cav01e_model();
    const auto fmr = FmrParams::yig_slab_default();
    const auto data = symmetrize(make_data(model, fmr, 0.0, 0, true));
    auto prob = cav01e_problem(data);
    const auto base = fit(prob);

    const double lambda = 2.5;
    BranchData scaled = data;
    for (auto& p : scaled.points) p.freq_ghz *= lambda;
    auto prob2 = cav01e_problem(scaled);
    prob2.fmr.gyro_ghz_per_t *= lambda;  // magnon frequencies scale with the data
    const auto res = fit(prob2);

    CHECK(res.params.f_bm_ghz == doctest::Approx(lambda * base.params.f_bm_ghz).epsilon(1e-9));
    CHECK(res.params.g_ghz == doctest::Approx(lambda * base.params.g_ghz).epsilon(1e-9));
    CHECK(res.params.delta_m_ghz ==
          doctest::Approx(lambda * base.params.delta_m_ghz).epsilon(1e-9));
    CHECK(res.params.f_dm_ghz == doctest::Approx(lambda * base.params.f_dm_ghz).epsilon(1e-9));
}

TEST_CASE("dark points drive f_dm and appear in the free set") {
    const auto model = cav01e_model();
    const auto fmr = FmrParams::yig_slab_default();
    auto prob = cav01e_problem(symmetrize(make_data(model, fmr, 0.001, 8, true, 1.38)));
    const auto res = fit(prob);
    CHECK(res.converged);
    CHECK(res.params.f_dm_ghz == doctest::Approx(1.38).epsilon(1e-3));
    CHECK(std::find(res.free_names.begin(), res.free_names.end(), "f_dm") !=
          res.free_names.end());
}

TEST_CASE("rank deficiency names the unidentifiable parameter") {
    BranchData d;
    for (int i = 0; i < 12; ++i) {
        d.points.push_back({0.1 + 0.01 * i, 1.38, BranchLabel::Dark});
    }
    FitProblem prob;
    prob.data = d;
    prob.model = DispersionModel::ShiftedDicke;
    prob.fmr = FmrParams::yig_slab_default();
    FitParameters guess;
    guess.f_bm_ghz = 5.0;
    guess.g_ghz = 1.0;
    guess.f_dm_ghz = 1.4;
    prob.guess = guess;
    try {
        (void)fit(prob);
        FAIL("expected RankDeficientError");
    } catch (const RankDeficientError& e) {
        CHECK(e.parameter == "f_bm");
    }
}

TEST_CASE("problem validation") {
    FitProblem prob;
    CHECK_THROWS_AS((void)fit(prob), InvalidArgument);  // empty data

    const auto model = cav01e_model();
    const auto fmr = FmrParams::yig_slab_default();
    prob = cav01e_problem(make_data(model, fmr, 0.0, 0, false, 1.38, 2));
    prob.fixed = {"d"};  // not a shifted-dicke parameter
    CHECK_THROWS_AS((void)fit(prob), InvalidArgument);

    BranchData tiny;
    tiny.points = {{0.1, 3.0, BranchLabel::Lower},
                   {0.1, 6.0, BranchLabel::Upper},
                   {0.12, 3.1, BranchLabel::Lower}};
    auto small = cav01e_problem(tiny);
    // 3 points for 3 free parameters: below the 3-per-parameter floor
    CHECK_THROWS_AS((void)fit(small), InvalidArgument);
}

TEST_CASE("non-convergence is reported, not thrown") {
    const auto model = cav01e_model();
    const auto fmr = FmrParams::yig_slab_default();
    auto prob = cav01e_problem(symmetrize(make_data(model, fmr, 0.01, 3)));
    prob.max_iterations = 1;
    const auto res = fit(prob);
    CHECK_FALSE(res.converged);
    CHECK(res.reason == ConvergenceReason::None);
}

TEST_CASE("convergence reason matches the documented contract") {
    const auto model = cav01e_model();
    const auto fmr = FmrParams::yig_slab_default();
    auto prob = cav01e_problem(symmetrize(make_data(model, fmr, 0.005, 17)));
    const auto res = fit(prob);
    REQUIRE(res.converged);
    const bool grad_ok = res.gradient_norm < 1e-10;
    const bool step_ok = res.reason == ConvergenceReason::StepSize;
    CHECK((grad_ok || step_ok));
}

} // TEST_SUITE
