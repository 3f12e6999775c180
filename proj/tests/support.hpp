#pragma once

#include <cmath>
#include <initializer_list>

#include <Eigen/Geometry>
#include <doctest.h>

#include "roundforge/builders.hpp"
#include "roundforge/sampling.hpp"
#include "roundforge/error.hpp"

namespace rf = roundforge;

inline rf::Vec vec(std::initializer_list<double> xs) {
  rf::Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

inline rf::Vec unit(std::initializer_list<double> xs) { return vec(xs).normalized(); }

inline rf::PointRef on(int piece, std::initializer_list<double> xs) {
  return rf::PointRef::on_sphere(piece, unit(xs));
}

// Point at angle t from e1 towards e3 on a unit 2-sphere piece.
inline rf::PointRef meridian(int piece, double t) {
  return rf::PointRef::on_sphere(piece, vec({std::cos(t), 0.0, std::sin(t)}));
}

#define CHECK_CODE(expr, code_)                                   \
  do {                                                            \
    bool thrown_ = false;                                         \
    try {                                                         \
      (void)(expr);                                               \
    } catch (const rf::GeometryError& e_) {                       \
      thrown_ = true;                                             \
      CHECK_MESSAGE(e_.code() == (code_), e_.what());             \
    }                                                             \
    CHECK_MESSAGE(thrown_, "expected " #code_);                   \
  } while (0)
