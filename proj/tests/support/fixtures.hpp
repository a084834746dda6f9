#pragma once

#include <filtlab/construction.hpp>
#include <filtlab/generators.hpp>

namespace testfx {

using namespace filtlab;

// The four-atom reference space: uniform mass, horizon 2, trivial F_0,
// F_1 = {ab},{cd}, terminal singletons.
inline FilteredSpace s1_space() {
  std::vector<Partition> parts = {
      Partition::trivial(4),
      Partition::from_blocks(4, {{0, 1}, {2, 3}}),
      Partition::singletons(4),
  };
  return build_space({"a", "b", "c", "d"},
                     {Rational(1, 4), Rational(1, 4), Rational(1, 4), Rational(1, 4)}, 2,
                     std::move(parts));
}

// tau = (1, 2, 2, inf); the inf slot of S1 is 3.
inline RandomTime s1_tau() {
  RandomTime tau;
  tau.value = {1, 2, 2, 3};
  return tau;
}

inline RandomVariable rv4(const char* a, const char* b, const char* c, const char* d) {
  RandomVariable v;
  v.values = {Rational::parse(a), Rational::parse(b), Rational::parse(c), Rational::parse(d)};
  return v;
}

}  // namespace testfx
