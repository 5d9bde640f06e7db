#pragma once

// Umbrella header for the fracid library: simulation and identification of
// dynamical systems governed by a three-member differential equation whose
// derivative orders may be any real numbers.

#include "fracid/commands.hpp"
#include "fracid/criterion.hpp"
#include "fracid/derivative.hpp"
#include "fracid/errors.hpp"
#include "fracid/gl_weights.hpp"
#include "fracid/identify.hpp"
#include "fracid/linear_fit.hpp"
#include "fracid/model.hpp"
#include "fracid/series.hpp"
#include "fracid/series_io.hpp"
#include "fracid/simulate.hpp"
