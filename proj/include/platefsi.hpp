#pragma once

#include "platefsi/errors.hpp"
#include "platefsi/symbol.hpp"
#include "platefsi/newton_polygon.hpp"
#include "platefsi/sobolev_index.hpp"
#include "platefsi/freq_solver.hpp"
#include "platefsi/laplace.hpp"
#include "platefsi/grid.hpp"
#include "platefsi/fft.hpp"
#include "platefsi/fields.hpp"
#include "platefsi/transform.hpp"
#include "platefsi/nonlinearities.hpp"
#include "platefsi/linear_step.hpp"
#include "platefsi/compat.hpp"
#include "platefsi/fixed_point.hpp"
#include "platefsi/config.hpp"
#include "platefsi/scenario.hpp"
