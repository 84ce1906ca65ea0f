#pragma once

// Umbrella header for the whole library.

#include "rdv/analysis.hpp"
#include "rdv/chebyshev.hpp"
#include "rdv/converse.hpp"
#include "rdv/core.hpp"
#include "rdv/energy.hpp"
#include "rdv/lp.hpp"
#include "rdv/minimax.hpp"
#include "rdv/potential.hpp"
#include "rdv/quadratic.hpp"
#include "rdv/report.hpp"
#include "rdv/spaces.hpp"
#include "rdv/spectral.hpp"
#include "rdv/structure.hpp"
#include "rdv/verify.hpp"
