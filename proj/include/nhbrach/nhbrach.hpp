// nhbrach.hpp
// Umbrella header.

#pragma once

#include "nhbrach/types.hpp"
#include "nhbrach/hamiltonian.hpp"
#include "nhbrach/integrator.hpp"
#include "nhbrach/evolution.hpp"
#include "nhbrach/brachistochrone.hpp"
#include "nhbrach/geometry.hpp"
#include "nhbrach/dissipative.hpp"
#include "nhbrach/config.hpp"
#include "nhbrach/csv.hpp"
#include "nhbrach/figures.hpp"
#include "nhbrach/run.hpp"
