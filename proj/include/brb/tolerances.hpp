#pragma once

namespace brb {

// Module-wide numeric tolerances. Exact algebraic identities are validated at
// kExact; quantities passing through eigensolvers or large averages use kLoose.
inline constexpr double kExact = 1e-12;
inline constexpr double kLoose = 1e-10;

// Slack on fitted decay parameters: |lambda|, |kappa| may exceed 1 by at most
// this much before the fit is rejected.
inline constexpr double kFitSlack = 0.05;

}  // namespace brb
