#include "vibrobeam/modal.hpp"
#include "vibrobeam/spectrum.hpp"
#include "vibrobeam/sweep.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace vibrobeam;

namespace {

AssembledModel model(int n) {
    BeamProperties p;
    p.n_elements = n;
    return assemble(p);
}

UnilateralSpring mode(SpringMode m) {
    UnilateralSpring s;
    s.mode = m;
    return s;
}

SweepConfig grid(double f0, double f1, int n, double tf) {
    SweepConfig c;
    c.f_start = f0;
    c.f_end = f1;
    c.n_points = n;
    c.tf = tf;
    return c;
}

std::string csv(const SweepResult& r) {
    std::ostringstream os;
    write_csv(os, r);
    return os.str();
}

} // namespace

TEST(SweepConfig, GridIncludesEndpoints) {
    const SweepConfig c;
    const std::vector<double> f = c.frequencies();
    ASSERT_EQ(f.size(), 526u);
    EXPECT_EQ(f.front(), 50.0);
    EXPECT_EQ(f.back(), 1100.0);
    EXPECT_DOUBLE_EQ(c.step(), 2.0);
    for (std::size_t i = 1; i < f.size(); ++i) {
        EXPECT_GT(f[i], f[i - 1]);
    }
}

TEST(SweepConfig, Validation) {
    EXPECT_THROW(grid(10, 5, 3, 0.1).validate(), std::invalid_argument);
    EXPECT_THROW(grid(5, 10, 1, 0.1).validate(), std::invalid_argument);
    EXPECT_THROW(grid(5, 10, 3, 0.0).validate(), std::invalid_argument);
}

TEST(FrequencySweep, LinearResonanceWithRayleighDamping) {
    const AssembledModel m = model(4);
    const UnilateralSpring spring = mode(SpringMode::none);
    const double f1 = fem_eigenfrequencies(m, spring, 1).frequencies_hz[0];
    SweepOptions opts;
    opts.damping.beta = 2.0 * 0.02 / (2.0 * std::numbers::pi * f1); // 2% at f1
    const double step = 2.0;
    const SweepResult r =
        frequency_sweep(m, spring, 50.0, grid(std::round(f1) - 20, std::round(f1) + 20, 21, 0.4), opts);
    ASSERT_EQ(r.failures(), 0u);
    const std::vector<double> peaks = r.peaks();
    const auto best = std::max_element(peaks.begin(), peaks.end()) - peaks.begin();
    EXPECT_LE(std::abs(r.points[static_cast<std::size_t>(best)].frequency_hz - f1), step);
}

TEST(FrequencySweep, BilateralIsHomogeneous) {
    const AssembledModel m = model(3);
    const SweepConfig cfg = grid(150, 250, 3, 0.02);
    const SweepResult a = frequency_sweep(m, mode(SpringMode::bilateral), 25.0, cfg);
    const SweepResult b = frequency_sweep(m, mode(SpringMode::bilateral), 50.0, cfg);
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        EXPECT_NEAR(b.points[i].peak_displacement / a.points[i].peak_displacement, 2.0, 2e-6);
    }
}

TEST(FrequencySweep, WorkerCountDoesNotChangeResult) {
    const AssembledModel m = model(3);
    const SweepConfig cfg = grid(100, 400, 7, 0.01);
    SweepOptions one;
    SweepOptions many;
    many.threads = 4;
    const SweepResult a = frequency_sweep(m, mode(SpringMode::unilateral), 50.0, cfg, one);
    const SweepResult b = frequency_sweep(m, mode(SpringMode::unilateral), 50.0, cfg, many);
    EXPECT_EQ(csv(a), csv(b));
    for (const SweepPoint& p : a.points) {
        EXPECT_TRUE(p.ok);
        EXPECT_GT(p.peak_displacement, 0.0);
        EXPECT_TRUE(std::isfinite(p.peak_displacement));
    }
}

TEST(FrequencySweep, OrderIndependentUnderFreshZero) {
    const AssembledModel m = model(3);
    const SweepConfig cfg = grid(120, 360, 4, 0.01);
    const SweepResult all = frequency_sweep(m, mode(SpringMode::unilateral), 50.0, cfg);
    // Evaluating a single point on its own gives the same bits.
    const State rest = State::at_rest(m.dof_count());
    for (std::size_t i = all.points.size(); i-- > 0;) {
        const SweepPoint p = sweep_point(m, mode(SpringMode::unilateral), 50.0,
                                         all.points[i].frequency_hz, cfg, SweepOptions{}, rest);
        EXPECT_EQ(p.peak_displacement, all.points[i].peak_displacement);
        EXPECT_EQ(p.argmax_time, all.points[i].argmax_time);
    }
}

TEST(FrequencySweep, ContinuationCarriesState) {
    const AssembledModel m = model(3);
    SweepConfig cfg = grid(150, 160, 2, 0.01);
    cfg.initial = InitialCondition::continuation;
    const SweepResult cont = frequency_sweep(m, mode(SpringMode::bilateral), 50.0, cfg);
    cfg.initial = InitialCondition::fresh_zero;
    const SweepResult fresh = frequency_sweep(m, mode(SpringMode::bilateral), 50.0, cfg);
    EXPECT_EQ(cont.points[0].peak_displacement, fresh.points[0].peak_displacement);
    EXPECT_NE(cont.points[1].peak_displacement, fresh.points[1].peak_displacement);
}

TEST(FrequencySweep, TipMetricNeverExceedsAllNodes) {
    const AssembledModel m = model(3);
    SweepConfig cfg = grid(100, 300, 3, 0.01);
    const SweepResult all = frequency_sweep(m, mode(SpringMode::unilateral), 50.0, cfg);
    cfg.metric = ResponseMetric::max_tip;
    const SweepResult tip = frequency_sweep(m, mode(SpringMode::unilateral), 50.0, cfg);
    for (std::size_t i = 0; i < all.points.size(); ++i) {
        EXPECT_LE(tip.points[i].peak_displacement, all.points[i].peak_displacement);
        EXPECT_EQ(tip.points[i].argmax_node, 3);
    }
}

TEST(FrequencySweep, FailuresArePerPoint) {
    const AssembledModel m = model(2);
    SweepOptions opts;
    // Unattainable accuracy: the step size collapses.
    opts.solver.rel_tol = 1e-300;
    opts.solver.abs_tol = 1e-300;
    const SweepResult r = frequency_sweep(m, mode(SpringMode::none), 50.0, grid(100, 200, 2, 0.01), opts);
    EXPECT_EQ(r.failures(), 2u);
    EXPECT_TRUE(std::isnan(r.points[0].peak_displacement));
    EXPECT_FALSE(r.points[0].message.empty());
    EXPECT_NE(csv(r).find(",failed\n"), std::string::npos);
}

TEST(SweepPeaks, SkipsFailedPoints) {
    SweepResult r;
    const double y[] = {1, 3, 1, 0, 2, 1};
    for (int i = 0; i < 6; ++i) {
        SweepPoint p;
        p.frequency_hz = 10.0 * i;
        p.peak_displacement = y[i];
        r.points.push_back(p);
    }
    r.points[3].ok = false;
    r.points[3].peak_displacement = NAN;
    const std::vector<SpectralPeak> peaks = sweep_peaks(r, 0.1);
    ASSERT_EQ(peaks.size(), 2u);
    EXPECT_EQ(peaks[0].frequency_hz, 10.0);
    EXPECT_EQ(peaks[1].frequency_hz, 40.0);
}

TEST(SweepCsv, Header) {
    const AssembledModel m = model(2);
    const SweepResult r = frequency_sweep(m, mode(SpringMode::none), 1.0, grid(100, 200, 2, 0.005));
    EXPECT_EQ(csv(r).rfind("f_hz,peak_disp_m,argmax_node,argmax_t_s,status\n", 0), 0u);
}
