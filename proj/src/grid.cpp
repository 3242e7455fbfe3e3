#include "spinframe/grid.hpp"

#include <cmath>

namespace spinframe {

void Grid2::validate() const {
  if (nu < 2 || nv < 2 || nu > 4096 || nv > 4096)
    throw Error(ErrorKind::Input, "grid sizes must lie in [2, 4096]");
  if (!std::isfinite(u0) || !std::isfinite(u1) || !std::isfinite(v0) || !std::isfinite(v1) || !(u1 > u0) ||
      !(v1 > v0))
    throw Error(ErrorKind::Input, "domain must be a non-empty finite rectangle");
}

}  // namespace spinframe
