#pragma once

// Umbrella header.

#include "selfdecomp/distributions.hpp"
#include "selfdecomp/errors.hpp"
#include "selfdecomp/mellin.hpp"
#include "selfdecomp/quadrature.hpp"
#include "selfdecomp/rng.hpp"
#include "selfdecomp/specfun.hpp"
#include "selfdecomp/verify.hpp"
