#pragma once

#include <string>

#include "model.hpp"

namespace testing_support {

inline rdde::Problem make_problem(const std::string& m1, const std::string& m2,
                                  const std::string& m3, const std::string& delay,
                                  const std::string& history, double t0, double tf,
                                  double step = 1e-3) {
  rdde::Problem p;
  p.m1 = rdde::expr::parse(m1);
  p.m2 = rdde::expr::parse(m2);
  p.m3 = rdde::expr::parse(m3);
  p.delay = rdde::expr::parse(delay);
  p.history = rdde::expr::parse(history);
  p.t0 = t0;
  p.tf = tf;
  p.step = step;
  return p;
}

// y''' = -y(t - 1), y = 1 before 0; solution 1 - t^3/6 on [0, 1].
inline rdde::Problem cubic_drop(double step = 1e-3) {
  return make_problem("0", "0", "1", "1", "1", 0.0, 1.0, step);
}

// y''' = -y, y = e^{-t}.
inline rdde::Problem decay(double step = 1e-3) {
  return make_problem("0", "0", "1", "0", "exp(-t)", 0.0, 1.0, step);
}

inline rdde::Problem constant_one(double tf = 2.0) {
  return make_problem("0", "0", "0", "0.5", "1", 0.0, tf);
}

}  // namespace testing_support
