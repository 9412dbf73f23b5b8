#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fgi/inequality.hpp"
#include "fgi/suites.hpp"

using namespace fgi;

namespace {

const FractionalOrder kHalf{0.5};

PerimeterValue fixed_perimeter(double value, FractionalOrder s) {
    PerimeterValue p;
    p.value = value;
    p.s = s;
    p.K = 1;
    return p;
}

}  // namespace

TEST(SigmaMin, Examples) {
    const double r = phi_inv(1.0 / 9.0);
    EXPECT_NEAR(sigma_min(0.2), std::exp(-0.5 * r * r), 1e-14);
    EXPECT_NEAR(sigma_min(0.45), std::min(iso_function(0.25), iso_function(0.65)), 1e-15);
    EXPECT_LE(sigma_min(0.3), iso_function(0.3));
    EXPECT_THROW(sigma_min(9.0 / 13.0), DomainError);
    EXPECT_THROW(sigma_min(0.0), DomainError);
}

TEST(FWeight, Examples) {
    EXPECT_NEAR(f_weight(0.5), 1.0, 1e-15);
    EXPECT_NEAR(f_weight(0.2), f_weight(0.8), 1e-12);
    double lowest = kInf;
    for (int i = 1; i <= 99; ++i) lowest = std::min(lowest, f_weight(i / 100.0));
    EXPECT_GE(lowest, std::sqrt(std::numbers::e) / 2.0);
    EXPECT_THROW(f_weight(1.0), DomainError);
}

TEST(Thresholds, Examples) {
    const auto t = z_thresholds(GaussianSet::left_halfline(0.2), kHalf, 0.1, 0.1);
    EXPECT_TRUE(t.degenerate);
    EXPECT_EQ(t.z0, 0.0);
    EXPECT_EQ(t.z1, 0.0);

    const GaussianSet e{{-kInf, -0.1}, {0.2, 0.5}};
    const auto pe = perimeter_spectral(e, kHalf);
    const auto ph = halfspace_perimeter(measure(e), kHalf);
    const auto th = z_thresholds(e, kHalf, pe.value, ph.value);
    EXPECT_FALSE(th.degenerate);
    EXPECT_GT(th.z0, 0.0);
    EXPECT_GT(th.z1, 0.0);
    const double base = asymmetry(e).value * measure(e) / constants(kHalf).beta_s;
    EXPECT_NEAR(th.z0, std::pow(base / (72.0 * pe.value), 2.0), 1e-14);
    EXPECT_NEAR(th.z1, std::pow(base / (144.0 * ph.value), 2.0), 1e-14);
}

TEST(Thresholds, OrderedWhenPerimeterIsModerate) {
    RandomSetFamily family(31, 5);
    int checked = 0;
    for (int i = 0; i < 100; ++i) {
        const auto e = family.next();
        for (double sv : {0.25, 0.5, 0.75}) {
            const FractionalOrder s(sv);
            const double pe = perimeter_spectral(e, s, 2000).value;
            const double ph = halfspace_perimeter(measure(e), s, 2000).value;
            if (pe > 2.0 * ph) continue;
            const auto th = z_thresholds(e, s, pe, ph);
            if (th.degenerate) continue;
            EXPECT_LT(th.z1, th.z0);
            ++checked;
        }
    }
    EXPECT_GT(checked, 50);
}

TEST(ConstantC, Examples) {
    const auto ph = halfspace_perimeter(0.3, kHalf);
    const double c1 = constant_C(kHalf, 0.3, {1.0}, ph);
    EXPECT_GT(c1, 0.0);
    EXPECT_DOUBLE_EQ(constant_C(kHalf, 0.3, {2.0}, ph), c1 / 2.0);
    EXPECT_THROW(constant_C(kHalf, 0.6, {}, ph), DomainError);
    EXPECT_THROW(constant_C(kHalf, 0.3, {0.0}, ph), DomainError);
}

TEST(ConstantC, GoldenValue) {
    // independent high-precision transcription with P_H = 0.09 (with-constant), s = m = 1/2, c = 1
    EXPECT_NEAR(constant_C(kHalf, 0.5, {1.0}, fixed_perimeter(0.09, kHalf)), 2.759035335167493606e-7,
                1e-12 * 2.759035335167493606e-7);
}

TEST(ConstantC, ConventionOfPerimeterIsNormalized) {
    const FractionalOrder s(0.4);
    const auto w = halfspace_perimeter(0.35, s, 3000, Convention::with_constant);
    const auto r = halfspace_perimeter(0.35, s, 3000, Convention::remark);
    EXPECT_NEAR(constant_C(s, 0.35, {}, w), constant_C(s, 0.35, {}, r), 1e-12 * constant_C(s, 0.35, {}, w));
}

TEST(ConstantC, MonotoneInCAndLinearInSigma) {
    for (double sv : {0.25, 0.5, 0.75}) {
        const FractionalOrder s(sv);
        for (double m : {0.05, 0.2, 0.4, 0.5}) {
            const auto ph = halfspace_perimeter(m, s, 2000);
            double prev = kInf;
            for (double c : {0.1, 0.5, 1.0, 3.0, 10.0}) {
                const double v = constant_C(s, m, {c}, ph);
                EXPECT_LT(v, prev);
                prev = v;
            }
            // every other factor is independent of sigma_m, so C increases strictly with it
            const double q = 2.0 / sv;
            const double rest = std::pow(3.0, 4.0 - 2.0 * q) * 25.0 / 169.0 * std::pow(0.5, 4.0 * q + 2.0) *
                                std::sqrt(std::numbers::e) / (2.0 - sv) * std::pow(m, q - 2.0) /
                                std::pow(constants(s).beta_s * ph.value, q - 1.0);
            EXPECT_NEAR(constant_C(s, m, {}, ph), sigma_min(m) * rest, 1e-12 * sigma_min(m) * rest);
        }
    }
}

TEST(VerifyMain, Examples) {
    for (double r : {-1.0, 0.0, 0.6}) {
        const auto rep = verify_main(GaussianSet::left_halfline(r), kHalf);
        EXPECT_NEAR(rep.deficit, 0.0, 1e-12);
        EXPECT_NEAR(rep.rhs, 0.0, 1e-12);
        EXPECT_TRUE(rep.satisfied);
    }
    const auto rep = verify_main(GaussianSet{{-kInf, -0.05}, {0.1, 0.4}}, kHalf, {1.0});
    EXPECT_TRUE(rep.satisfied);
    EXPECT_NE(rep.note.find("c=1"), std::string::npos);
    EXPECT_NE(rep.note.find("assumed"), std::string::npos);
    EXPECT_THROW(verify_main(GaussianSet::empty(), kHalf), DegenerateSetError);
}

TEST(VerifyMain, ComplementInvariance) {
    RandomSetFamily family(41, 6);
    for (int i = 0; i < 40; ++i) {
        const auto e = family.next();
        const auto a = verify_main(e, kHalf, {}, 3000);
        const auto b = verify_main(complement(e), kHalf, {}, 3000);
        EXPECT_NEAR(a.deficit, b.deficit, 1e-12);
        EXPECT_NEAR(a.asym, b.asym, 1e-12);
        EXPECT_EQ(a.branch, b.branch);
    }
}

TEST(VerifyMain, DeficitNonnegativityAndBranchConsistency) {
    RandomSetFamily family(51, 7);
    for (int i = 0; i < 500; ++i) {
        const auto e = family.next();
        for (double sv : {0.25, 0.5, 0.75}) {
            const FractionalOrder s(sv);
            const auto r = verify_main(e, s, {}, 10000);
            EXPECT_GE(r.deficit, -r.budget) << i << ' ' << sv;
            EXPECT_GE(r.rhs, 0.0);
            EXPECT_DOUBLE_EQ(r.deficit, r.P_E.value - r.P_H.value);
            EXPECT_NEAR(r.budget, 2.0 * (r.P_E.tail_bound + r.P_H.tail_bound), 1e-15);
            const double q = 2.0 / sv;
            const double m = std::min(r.m, 1.0 - r.m);
            if (r.P_E.value > 2.0 * r.P_H.value) {
                EXPECT_EQ(r.branch, Branch::large_perimeter);
                EXPECT_NEAR(r.rhs, r.P_H.value * std::pow(0.5, q) * std::pow(r.asym, q), 1e-14);
            } else {
                EXPECT_EQ(r.branch, Branch::main);
                EXPECT_NEAR(r.C, constant_C(s, m, {}, r.P_H), 1e-10 * r.C);
                EXPECT_NEAR(r.rhs, r.C * std::pow(r.asym, q), 1e-12 * r.C + 1e-300);
            }
            EXPECT_EQ(r.satisfied, r.deficit >= r.rhs - r.budget);
        }
    }
}

TEST(Transfer, Examples) {
    const GaussianSet f{{-kInf, -0.3}, {0.2, 0.9}};
    const auto same = verify_transfer_lemma(f, f, 0.2);
    EXPECT_EQ(same.outcome, Outcome::holds);
    EXPECT_EQ(same.c_kappa, 1.0);
    const auto half = verify_transfer_lemma(GaussianSet{{-kInf, 0.1}, {2.0, 2.1}}, GaussianSet::left_halfline(0.1), 0.3);
    // asym(F) = 0 leaves the precondition only for E = F up to measure zero
    EXPECT_NE(half.outcome, Outcome::violated);
    const auto triv = verify_transfer_lemma(GaussianSet::left_halfline(0.1), GaussianSet::left_halfline(0.1), 0.3);
    EXPECT_EQ(triv.outcome, Outcome::holds);
    EXPECT_EQ(triv.asym_F, 0.0);
    EXPECT_THROW(verify_transfer_lemma(f, f, 0.5), DomainError);
    EXPECT_THROW(verify_transfer_lemma(f, f, 0.0), DomainError);
}

TEST(Transfer, RandomPerturbationsHaveNoViolations) {
    SuiteOptions opt;
    opt.seed = 3;
    const auto report = run_suite(Suite::transfer, opt);
    ASSERT_EQ(report.summaries.size(), 1u);
    EXPECT_EQ(report.summaries[0].cases, 500u);
    EXPECT_EQ(report.summaries[0].failed, 0u);
    EXPECT_GT(report.summaries[0].passed, 400u);
}

TEST(Closeness, Examples) {
    const auto ph = perimeter_spectral(GaussianSet::left_halfline(0.0), kHalf, 4000);
    const double hz = 0.9 * closeness_z_bound(kHalf, 20.0, ph.value + ph.tail_bound);
    const auto h = verify_levelset_closeness(GaussianSet::left_halfline(0.0), kHalf, 0.5, hz, 20.0, 4000);
    EXPECT_EQ(h.outcome, Outcome::holds);
    EXPECT_LT(h.lost, 1e-8);
    EXPECT_LT(h.gained, 1e-8);

    const GaussianSet e{{0.1, 1.2}};
    const auto p = perimeter_spectral(e, kHalf);
    const double zmax = closeness_z_bound(kHalf, 20.0, p.value + p.tail_bound);
    for (double t : {0.25, 0.75}) {
        const auto r = verify_levelset_closeness(e, kHalf, t, 0.9 * zmax, 20.0);
        EXPECT_EQ(r.outcome, Outcome::holds) << t;
        EXPECT_LE(r.lost, r.bound);
        EXPECT_LE(r.gained, r.bound);
    }
    EXPECT_THROW(verify_levelset_closeness(e, kHalf, 0.5, 1.1 * zmax, 20.0), DomainError);
    EXPECT_THROW(verify_levelset_closeness(e, kHalf, 0.9, 0.5 * zmax, 20.0), DomainError);
}

TEST(Closeness, ViolationNeedsToExceedResolution) {
    LevelSetRecord rec;
    rec.set = GaussianSet{{0.0, 2.0}};
    rec.resolution = 0.0;
    const GaussianSet e{{0.0, 1.0}};
    EXPECT_EQ(closeness_from_record(e, rec, 100.0).outcome, Outcome::violated);
    rec.resolution = 1.0;
    EXPECT_EQ(closeness_from_record(e, rec, 100.0).outcome, Outcome::holds);
}

TEST(LevelSetBounds, Examples) {
    const auto v = verify_levelset_bounds(GaussianSet::left_halfline(0.3), kHalf, 0.5, 0.1);
    EXPECT_TRUE(v.vacuous);
    EXPECT_EQ(v.outcome, Outcome::holds);

    const GaussianSet e{{-kInf, -0.3}, {0.0, 0.25}};
    const auto p = perimeter_spectral(e, kHalf);
    const double z0 = z_thresholds(e, kHalf, p.value + p.tail_bound, p.value).z0;
    const auto r = verify_levelset_bounds(e, kHalf, 0.5, 0.5 * z0);
    EXPECT_FALSE(r.vacuous);
    EXPECT_EQ(r.outcome, Outcome::holds);
    EXPECT_LE(r.measure_gap, r.measure_bound);
    EXPECT_GE(r.asym_level, r.asym_bound);
    EXPECT_TRUE(r.sandwich);
    const double m = measure(e);
    const auto rec = level_set(ExtensionField(e, kHalf), 0.5, 0.5 * z0);
    EXPECT_GT(rec.mu, 5.0 / 9.0 * m);
    EXPECT_LT(rec.mu, 13.0 / 9.0 * m);
    EXPECT_THROW(verify_levelset_bounds(e, kHalf, 0.5, 2.0 * z0), DomainError);
}

TEST(LevelSetBounds, RecordArithmetic) {
    LevelSetRecord rec;
    rec.set = GaussianSet::left_halfline(0.0);
    rec.mu = 0.5;
    // asymmetry of a halfline is 0, far below 5/13 of any positive A, unless the budget is wide
    EXPECT_EQ(bounds_from_record(0.5, 0.4, rec).outcome, Outcome::violated);
    rec.resolution = 0.05;
    EXPECT_EQ(bounds_from_record(0.5, 0.4, rec).outcome, Outcome::holds);
}

TEST(OutcomeNames, Strings) {
    EXPECT_EQ(to_string(Outcome::holds), "holds");
    EXPECT_EQ(to_string(Outcome::violated), "violated");
    EXPECT_EQ(to_string(Outcome::inapplicable), "inapplicable");
    EXPECT_EQ(to_string(Branch::large_perimeter), "large_perimeter");
}
