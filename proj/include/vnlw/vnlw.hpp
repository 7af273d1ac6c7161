#pragma once

#include "vnlw/error.hpp"
#include "vnlw/lattice.hpp"
#include "vnlw/spectra.hpp"
#include "vnlw/states.hpp"
#include "vnlw/bipartite.hpp"
#include "vnlw/dynamics.hpp"
#include "vnlw/io.hpp"
#include "vnlw/config.hpp"
#include "vnlw/scenarios.hpp"
