#pragma once

#include <optional>
#include <string>

#include "thetapm/forms.hpp"

namespace thetapm {

// Named series for the command line and the verification grids:
//   delta, e4, e6, g2, gk:<k>, ek:<k>, and products <a>*<b>.
// G_2 is expandable but is not a classical form of fixed weight, so names
// involving it resolve to a series without a usable weight.
struct NamedSeries {
  QSeries series;   // exact, over Q
  long weight;      // sum of factor weights (2 for g2)
  bool classical;   // false when a g2 factor is present
};

NamedSeries resolve_named_series(const std::string& name, long precision);

// The named form with rational coordinates; rejects names involving g2.
Form resolve_form(const std::string& name);

}  // namespace thetapm
