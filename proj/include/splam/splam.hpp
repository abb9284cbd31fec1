#pragma once

#include "splam/bundle.hpp"
#include "splam/experiments.hpp"
#include "splam/io.hpp"
#include "splam/metrics.hpp"
#include "splam/objective.hpp"
#include "splam/parallel.hpp"
#include "splam/path.hpp"
#include "splam/prox.hpp"
#include "splam/rng.hpp"
#include "splam/solvers.hpp"
#include "splam/spline_basis.hpp"
