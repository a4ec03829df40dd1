#pragma once

#include "nhtopo/model.hpp"

namespace testing {

inline nhtopo::LatticeParams chain(double theta, double lambda, double coop, double delta = 0.0) {
  nhtopo::LatticeParams p;
  p.range = 1;
  p.lambda = {lambda};
  p.cooperativity = {coop};
  p.theta = {theta};
  p.delta = delta;
  return p;
}

inline nhtopo::LatticeParams range2(double c2) {
  nhtopo::LatticeParams p;
  p.range = 2;
  p.lambda = {0.3, 2.0};
  p.cooperativity = {0.3, c2};
  p.theta = {nhtopo::kPi / 2, nhtopo::kPi / 2};
  return p;
}

}  // namespace testing
