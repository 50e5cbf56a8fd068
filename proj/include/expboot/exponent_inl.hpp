#pragma once

// Template definitions for exponent.hpp.

#include <cassert>

namespace expboot::detail {

template <class Map>
void check_increasing([[maybe_unused]] const Map& map, [[maybe_unused]] const Exponent& at,
                      [[maybe_unused]] const QuadraticSurd& lower_bound) {
#ifndef NDEBUG
  if (at.is_infinite() || at.value() <= lower_bound) return;
  const QuadraticSurd gap = at.value() - lower_bound;
  const Exponent below(at.value() - gap / QuadraticSurd::from_int(1024));
  const Exponent here(at.value());
  assert(exp_compare(map(below), map(here)) < 0 && "almost flag propagated through a non-increasing map");
#endif
}

}  // namespace expboot::detail
