#pragma once

// Umbrella header: optimal privacy-preserving additive noise by Fisher
// information minimization under a quality budget, plus the sampling
// mechanism and an estimating adversary for checking the Cramer-Rao floor.

#include "fisher_noise/errors.hpp"
#include "fisher_noise/grid.hpp"
#include "fisher_noise/quality.hpp"
#include "fisher_noise/problem.hpp"
#include "fisher_noise/density.hpp"
#include "fisher_noise/solver.hpp"
#include "fisher_noise/designer.hpp"
#include "fisher_noise/mechanism.hpp"
#include "fisher_noise/serialize.hpp"
