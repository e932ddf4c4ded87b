#pragma once

#include <optional>

namespace dmfaw {

// PI-style adaptation of the feature-selection exponent p.
struct PiController {
  double p = 2.0;
  double tol = 1e-3;
  std::optional<double> prev_loss;
  double n1 = 1.0;
  double n2 = 0.2;
  double p_min = 1.001;
  double p_max = 10.0;
};

// p <- clamp(p (Tol/|c|)^n1 (|prev|/|c|)^n2), then Tol <- Tol (1 + |c - prev| / |prev|).
// First call only records the loss.
PiController controller_step(PiController ctrl, double closs);

}  // namespace dmfaw
