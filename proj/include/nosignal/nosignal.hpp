#pragma once

#include "nosignal/amplitude.hpp"
#include "nosignal/audit.hpp"
#include "nosignal/config.hpp"
#include "nosignal/errors.hpp"
#include "nosignal/grid.hpp"
#include "nosignal/parallel.hpp"
#include "nosignal/path.hpp"
#include "nosignal/polarization.hpp"
#include "nosignal/quadrature.hpp"
#include "nosignal/runner.hpp"
#include "nosignal/sampler.hpp"
#include "nosignal/table.hpp"
#include "nosignal/wedge.hpp"
