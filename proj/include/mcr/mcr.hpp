#pragma once

// Umbrella header.

#include "mcr/angular.hpp"
#include "mcr/config.hpp"
#include "mcr/errors.hpp"
#include "mcr/fixed.hpp"
#include "mcr/generate.hpp"
#include "mcr/geom.hpp"
#include "mcr/geom3.hpp"
#include "mcr/io.hpp"
#include "mcr/mcr3d.hpp"
#include "mcr/oracle.hpp"
#include "mcr/poly.hpp"
#include "mcr/segment.hpp"
#include "mcr/svg.hpp"
#include "mcr/util.hpp"
