#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "pawf/regimes.hpp"

using namespace pawf;
using testing::rel_err;

namespace {
const PaParams kPa(10.0, 1.0);
}

TEST_CASE("noise_threshold pinned cases") {
  const double p_avg = 0.02;
  CHECK(noise_threshold(ComplexMatrix::Identity(6, 6), kPa, p_avg) ==
        doctest::Approx(distortion_variance(p_avg, kPa)).epsilon(1e-15));
  CHECK(noise_threshold(ComplexMatrix::Zero(4, 4), kPa, p_avg) == 0.0);
  // deep linear regime: threshold ~ 0, everything is noise-limited
  const double tiny = noise_threshold(testing::random_channel(4, 4, 3), kPa, 1e-7);
  CHECK(tiny <= 1e-100);
  CHECK(classify(1e-15, tiny).regime == Regime::NoiseLimited);
  CHECK_THROWS_AS(noise_threshold(ComplexMatrix::Identity(2, 2), kPa, -1.0), std::domain_error);
}

TEST_CASE("classify") {
  CHECK(classify(10.0, 1.0, 1.0).regime == Regime::NoiseLimited);
  CHECK(classify(0.1, 1.0, 1.0).regime == Regime::DistortionLimited);
  CHECK(classify(2.0, 1.0, 3.0).regime == Regime::Transition);
  CHECK(classify(2.0, 1.0, 3.0).ratio == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(std::isinf(classify(1.0, 0.0).ratio));
  CHECK_THROWS_AS(classify(0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(classify(1.0, 1.0, 0.5), std::domain_error);
}

TEST_CASE("trace identity at the threshold") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const int n_r = 3 + static_cast<int>(seed % 4);
    const int n_t = 2 + static_cast<int>(seed % 5);
    const ChannelMatrix h = testing::random_channel(n_r, n_t, 600 + seed);
    const double p_avg = 0.01 * std::pow(10.0, (static_cast<double>(seed % 5) - 2.0) / 2.0);
    const double th = noise_threshold(h, kPa, p_avg);

    const double sigma = distortion_variance(p_avg, kPa);
    const ComplexMatrix dist_cov = sigma * h * h.adjoint();
    CHECK(rel_err(dist_cov.trace().real(), n_r * th) <= 1e-9);
  }
}

TEST_CASE("threshold scales with the channel and with p_avg") {
  const ChannelMatrix h = testing::random_channel(5, 5, 40);
  const double p_avg = 0.05;
  CHECK(rel_err(noise_threshold(2.0 * h, kPa, p_avg),
                4.0 * noise_threshold(h, kPa, p_avg)) <= 1e-12);

  double prev = -1.0;
  for (double p = 1e-4; p <= 10.0; p *= 3.0) {
    const double th = noise_threshold(h, kPa, p);
    CHECK(th >= prev);
    prev = th;
  }
}
