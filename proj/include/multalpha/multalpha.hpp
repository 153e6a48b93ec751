#pragma once
// Umbrella header.

#include "multalpha/alphasel.hpp"
#include "multalpha/costengine.hpp"
#include "multalpha/costtable.hpp"
#include "multalpha/error.hpp"
#include "multalpha/format.hpp"
#include "multalpha/quadrature.hpp"
#include "multalpha/report.hpp"
#include "multalpha/rng.hpp"
#include "multalpha/scenario.hpp"
#include "multalpha/scenario_io.hpp"
#include "multalpha/specfun.hpp"
#include "multalpha/studies.hpp"
#include "multalpha/testmodel.hpp"
