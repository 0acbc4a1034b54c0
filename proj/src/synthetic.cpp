// Copyright 2026 The Glyphscape Authors
// SPDX-License-Identifier: Apache-2.0

#include "glyphscape/synthetic.hpp"

#include <cmath>
#include <cstdio>
#include <random>

#include "glyphscape/math.hpp"

namespace glyphscape {

namespace {

// Distributions built directly on the engine's raw output; the standard
// distribution classes are not specified bit-for-bit across libraries.
class Stream {
 public:
  explicit Stream(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

  double exponential(double mean) { return -mean * std::log(1.0 - uniform()); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace

Dataset synthetic_events(std::size_t rows, std::uint64_t seed) {
  Stream rng(seed);
  std::vector<std::vector<double>> cols(7, std::vector<double>(rows));
  for (std::size_t r = 0; r < rows; ++r) {
    const bool signal = rng.uniform() < 0.3;
    const double mass = signal ? 125.0 + 2.0 * rng.normal() : 100.0 + rng.exponential(30.0);
    // Signal photon pairs are back-to-back more often.
    const double dphi = signal ? kPi - std::min(kPi, std::abs(0.6 * rng.normal()))
                               : kPi * rng.uniform() * rng.uniform() + kPi * 0.25 * rng.uniform();
    const double eg1 = std::exp((signal ? 4.0 : 3.5) + 0.45 * rng.normal());
    const double eg2 = std::exp((signal ? 3.7 : 3.2) + 0.45 * rng.normal());
    const double eta = 1.2 * rng.normal();
    const double pt = 0.5 * (eg1 + eg2) / std::cosh(std::min(eta, 5.0)) + rng.exponential(5.0);
    cols[0][r] = std::min(dphi, kPi);
    cols[1][r] = mass;
    cols[2][r] = eg1;
    cols[3][r] = eg2;
    cols[4][r] = eta;
    cols[5][r] = pt;
    cols[6][r] = signal ? 1.0 : 0.0;
  }
  return Dataset({"dphi", "mass", "eg1", "eg2", "eta", "pt", "signal"}, std::move(cols));
}

void write_csv(std::ostream& out, const Dataset& data) {
  const auto& names = data.column_names();
  for (std::size_t c = 0; c < names.size(); ++c) out << (c ? "," : "") << names[c];
  out << '\n';
  char buf[40];
  for (std::size_t r = 0; r < data.row_count(); ++r) {
    for (std::size_t c = 0; c < names.size(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", data.value(r, c));
      out << (c ? "," : "") << buf;
    }
    out << '\n';
  }
}

}  // namespace glyphscape
