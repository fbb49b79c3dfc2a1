#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "dtqc/error.hpp"
#include "dtqc/spectral.hpp"

#include <cmath>
#include <doctest.h>
#include <numbers>
#include <random>

using namespace dtqc;

namespace {

constexpr double dt = 0.05;

template <typename F>
std::vector<double> sampled(double duration, F &&f) {
    std::vector<double> x;
    for(std::size_t k = 0; k * dt < duration - 1e-12; ++k) x.push_back(f(k * dt));
    return x;
}

ErrorKind kind_of(auto &&f) {
    try {
        f();
    } catch(const Error &e) {
        return e.kind();
    }
    return ErrorKind::io;
}

const double f_l = 2 * std::numbers::pi / 4.74;
const double f_r = f_l * std::numbers::phi;

} // namespace

TEST_CASE("pure tone") {
    const auto x    = sampled(500.0, [](double t) { return std::cos(1.0 * t); });
    const auto spec = fourier_spectrum(x, dt);
    CHECK(spec.resolution == doctest::Approx(2 * std::numbers::pi / (x.size() * dt)));
    CHECK(spec.omega.size() == x.size() / 2 + 1);
    CHECK(spec.omega.back() == doctest::Approx(std::numbers::pi / dt));
    const auto peaks = detect_peaks(spec);
    REQUIRE(peaks.size() == 1);
    CHECK(std::abs(peaks[0].omega - 1.0) <= spec.resolution);
    CHECK(peaks[0].amplitude == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("constant series has an all-zero spectrum") {
    const auto spec = fourier_spectrum(std::vector<double>(1000, 0.7), dt);
    for(double a : spec.amplitude) CHECK(a < 1e-13);
    CHECK(detect_peaks(spec).empty());
}

TEST_CASE("two tones keep their amplitude ratio") {
    const auto x     = sampled(500.0, [](double t) { return 0.3 * std::cos(0.41 * t) + 0.5 * std::cos(1.73 * t + 0.4); });
    const auto spec  = fourier_spectrum(x, dt);
    const auto peaks = detect_peaks(spec);
    REQUIRE(peaks.size() == 2);
    CHECK(std::abs(peaks[0].omega - 1.73) < spec.resolution / 2);
    CHECK(std::abs(peaks[1].omega - 0.41) < spec.resolution / 2);
    CHECK(peaks[1].amplitude / peaks[0].amplitude == doctest::Approx(0.6).epsilon(0.1));
}

TEST_CASE("seeded white noise has no peaks above five medians") {
    std::mt19937_64                  rng(2024);
    std::normal_distribution<double> g;
    std::vector<double>              x(20000);
    for(auto &v : x) v = g(rng);
    CHECK(detect_peaks(fourier_spectrum(x, dt)).empty());
}

TEST_CASE("sub-bin refinement locates tones within a quarter bin") {
    for(double w : {0.3, 0.777, 1.2345, 2.5, 3.9}) {
        const auto x     = sampled(400.0, [&](double t) { return std::sin(w * t + 1.0); });
        const auto spec  = fourier_spectrum(x, dt);
        const auto peaks = detect_peaks(spec);
        REQUIRE(!peaks.empty());
        CHECK(std::abs(peaks[0].omega - w) < spec.resolution / 4);
    }
}

TEST_CASE("Parseval") {
    const auto x = sampled(600.0, [](double t) { return 0.8 * std::cos(0.9 * t) + 0.3 * std::sin(2.2 * t) + 0.1 * std::cos(5.0 * t + 1.0) + 0.2; });
    double     mean = 0.0;
    for(double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    double energy = 0.0;
    for(double v : x) energy += (v - mean) * (v - mean);
    const auto spec = fourier_spectrum(x, dt);
    double     sum  = 0.0;
    for(double a : spec.amplitude) sum += a * a;
    const auto L = static_cast<double>(x.size());
    CHECK(sum * L / 4 == doctest::Approx(energy / 2).epsilon(0.01));
    CHECK(sum / 2 == doctest::Approx(energy / L).epsilon(0.01));
}

TEST_CASE("Hann window keeps tone amplitudes") {
    const auto x     = sampled(500.0, [](double t) { return 0.4 * std::cos(1.3 * t); });
    const auto peaks = detect_peaks(fourier_spectrum(x, dt, Window::hann));
    REQUIRE(!peaks.empty());
    CHECK(peaks[0].amplitude == doctest::Approx(0.4).epsilon(0.05));
}

TEST_CASE("spectrum preconditions") {
    CHECK(kind_of([] { (void)fourier_spectrum(std::vector<double>(10, 1.0), dt); }) == ErrorKind::sampling);
    std::vector<double> t(100), x(100, 0.0);
    for(std::size_t k = 0; k < t.size(); ++k) t[k] = k * dt;
    CHECK(uniform_step(t) == doctest::Approx(dt));
    CHECK_NOTHROW((void)fourier_spectrum(t, x));
    t[50] += 0.01;
    CHECK(kind_of([&] { (void)fourier_spectrum(t, x); }) == ErrorKind::sampling);
    CHECK(kind_of([] { (void)detect_peaks(Spectrum{}, 1.0); }) == ErrorKind::validation);
}

TEST_CASE("labels of the golden preset") {
    CHECK(f_l == doctest::Approx(1.32555).epsilon(1e-5));
    auto label_of = [](double w) { return label_peak({w, 1.0}, f_l, f_r, 4, 0.00628).label; };
    CHECK(label_of(1.735) == PeakLabel{1, 1});
    CHECK(label_of(0.4096) == PeakLabel{-1, 1});
    CHECK(label_of(f_l) == PeakLabel{2, 0});
    CHECK(predicted_frequency({-1, 1}, f_l, f_r) == doctest::Approx((f_r - f_l) / 2));
    const auto far = label_peak({0.0001, 1.0}, f_l, f_r, 4, 1e-6);
    CHECK_FALSE(far.label.has_value());
}

TEST_CASE("label ties prefer small numerators, then small k2") {
    const auto a = label_peak({1.0, 1.0}, 1.0, 1.0, 4, 1e-3);
    CHECK(a.label == PeakLabel{2, 0});
    const auto b = label_peak({0.5, 1.0}, 1.0, 1.0, 4, 1e-3);
    CHECK(b.label == PeakLabel{1, 0});
    CHECK(a.residual == doctest::Approx(0.0));
}

TEST_CASE("labeling is scale invariant") {
    for(double w : {0.4096, 1.735, 0.663, 2.9}) {
        const auto a = label_peak({w, 1.0}, f_l, f_r, 4, 0.01);
        const auto b = label_peak({2 * w, 1.0}, 2 * f_l, 2 * f_r, 4, 0.02);
        CHECK(a.label == b.label);
    }
}

TEST_CASE("labeled peaks never carry (0,0)") {
    const auto x      = sampled(1000.0, [](double t) { return std::cos(0.4096 * t) + 0.2 * std::cos(1.735 * t) + 0.05 * std::cos(0.002 * t); });
    const auto spec   = fourier_spectrum(x, dt);
    const auto peaks  = detect_peaks(spec);
    const auto labels = label_peaks(peaks, f_l, f_r, 4, spec.resolution);
    CHECK(labels.size() == peaks.size());
    for(const auto &p : labels)
        if(p.label) {
            CHECK_FALSE((p.label->k1 == 0 and p.label->k2 == 0));
            CHECK(p.residual <= spec.resolution);
        }
}

TEST_CASE("lifetime of a damped cosine") {
    const auto fit = component_lifetime(sampled(1000.0, [](double t) { return std::exp(-t / 200) * std::cos(1.7 * t); }), dt, 1.7, 50 * 4.74, 10 * 4.74);
    CHECK(fit.status == LifetimeStatus::resolved);
    CHECK(fit.tau == doctest::Approx(200).epsilon(0.1));
    CHECK(fit.r2 > 0.99);
    CHECK(fit.n_windows >= 3);
}

TEST_CASE("undamped cosine is non-decaying") {
    const auto fit = component_lifetime(sampled(1000.0, [](double t) { return 0.3 * std::cos(1.7 * t); }), dt, 1.7, 237.0, 47.4);
    CHECK(fit.status == LifetimeStatus::non_decaying);
    CHECK(std::isinf(fit.effective_tau()));
}

TEST_CASE("short lifetimes near the classification threshold are resolved") {
    const double tau = 30 * 4.74;
    const auto   fit = component_lifetime(sampled(1000.0, [&](double t) { return std::exp(-t / tau) * std::cos(1.735 * t); }), dt, 1.735, 237.0, 47.4);
    CHECK(fit.status == LifetimeStatus::resolved);
    CHECK(fit.tau == doctest::Approx(tau).epsilon(0.1));
}

TEST_CASE("lifetime windowing errors") {
    const auto x = sampled(1000.0, [](double t) { return std::cos(1.7 * t); });
    CHECK(kind_of([&] { (void)component_lifetime(x, dt, 1.7, 10.0, 5.0); }) == ErrorKind::windowing);
    CHECK(kind_of([&] { (void)component_lifetime(x, dt, 1.7, 400.0, 40.0); }) == ErrorKind::windowing);
    CHECK(kind_of([&] { (void)component_lifetime(x, dt, 0.0, 100.0, 10.0); }) == ErrorKind::windowing);
    CHECK_FALSE(try_component_lifetime(x, dt, 1.7, {400.0, 40.0}).has_value());
    CHECK(try_component_lifetime(x, dt, 1.7, {300.0, 40.0}).has_value());
}

TEST_CASE("series analysis combines the steps") {
    const auto x  = sampled(1000.0, [](double t) { return 0.2 * std::cos(0.4085 * t) + 0.1 * std::cos(1.7342 * t); });
    const auto an = analyze_series(x, dt, f_l, f_r);
    REQUIRE(an.peaks.size() >= 2);
    CHECK(an.peaks[0].peak.label == PeakLabel{-1, 1});
    CHECK(an.peaks[1].peak.label == PeakLabel{1, 1});
    REQUIRE(an.peaks[0].lifetime.has_value());
    CHECK(an.peaks[0].lifetime->status == LifetimeStatus::non_decaying);
    CHECK(an.lifetime_window == doctest::Approx(50 * 4.74));
    CHECK(amplitude_near(an.spectrum, 0.4085) == doctest::Approx(0.2).epsilon(0.1));
}
