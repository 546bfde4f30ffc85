#pragma once

#include "amcf/errors.hpp"
#include "amcf/torus_field.hpp"
#include "amcf/geometry.hpp"
#include "amcf/reduction.hpp"
#include "amcf/evolution.hpp"
#include "amcf/equilibria.hpp"
#include "amcf/stability.hpp"
#include "amcf/bifurcation.hpp"
#include "amcf/io.hpp"
