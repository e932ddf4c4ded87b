#include "dmfaw/controller.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dmfaw {

PiController controller_step(PiController ctrl, double closs) {
  if (!std::isfinite(closs)) throw std::runtime_error("controller_step: non-finite loss");
  if (!ctrl.prev_loss) {
    ctrl.prev_loss = closs;
    return ctrl;
  }
  const double ploss = *ctrl.prev_loss;
  const double c = std::max(std::abs(closs), 1e-12);
  const double pl = std::max(std::abs(ploss), 1e-12);
  const double p = ctrl.p * std::pow(ctrl.tol / c, ctrl.n1) * std::pow(pl / c, ctrl.n2);
  ctrl.p = std::clamp(p, ctrl.p_min, ctrl.p_max);
  ctrl.tol = ctrl.tol * (1.0 + std::abs(closs - ploss) / pl);
  ctrl.prev_loss = closs;
  return ctrl;
}

}  // namespace dmfaw
