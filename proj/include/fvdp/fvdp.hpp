#pragma once

#include "fvdp/boundary.hpp"
#include "fvdp/config.hpp"
#include "fvdp/convergence.hpp"
#include "fvdp/csv.hpp"
#include "fvdp/diagnostics.hpp"
#include "fvdp/driftdiffusion.hpp"
#include "fvdp/equilibrium.hpp"
#include "fvdp/flux.hpp"
#include "fvdp/mesh.hpp"
#include "fvdp/model.hpp"
#include "fvdp/potential.hpp"
#include "fvdp/presets.hpp"
#include "fvdp/solver.hpp"
