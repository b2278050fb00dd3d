#pragma once

#include <complex>
#include <vector>

#include <doctest.h>

#include "gamowkit/error.hpp"
#include "gamowkit/gamow.hpp"
#include "gamowkit/poles.hpp"

namespace gktest {

using gamowkit::Complex;

inline double rel_error(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

// Paired, normalized states for the first 160 resonances of the lambda = 10,
// a = 1 delta shell, built once.
inline const std::vector<gamowkit::GamowState>& delta_shell_states() {
  static const auto model = gamowkit::PotentialModel::delta_shell(10.0, 1.0);
  static const auto states = [] {
    const auto poles = gamowkit::first_resonances(model, 160, 0);
    return gamowkit::paired_states(model, poles, gamowkit::make_radial_grid(model));
  }();
  return states;
}

inline const gamowkit::PotentialModel& delta_shell() {
  static const auto model = gamowkit::PotentialModel::delta_shell(10.0, 1.0);
  return model;
}

}  // namespace gktest

#define CHECK_ERROR_KIND(expr, expected)                              \
  do {                                                                \
    bool gk_thrown = false;                                           \
    try {                                                             \
      (void)(expr);                                                   \
    } catch (const gamowkit::Error& gk_error) {                       \
      gk_thrown = true;                                               \
      CHECK_MESSAGE(gk_error.kind() == (expected), gk_error.what());  \
    }                                                                 \
    CHECK_MESSAGE(gk_thrown, "expected " #expected);                  \
  } while (false)
