#pragma once

// Penalized full-dimensional scaling: minimize raw stress over
// configurations with as many columns as points, while a growing quadratic
// penalty on the trailing columns pushes the solution into the first p
// dimensions. Following the penalty path from zero upward turns a
// p-dimensional scaling problem into a sequence of full-dimensional ones,
// each of which is free of the local-minimum trouble of fixed low rank.

#include "pfds/align.hpp"
#include "pfds/core.hpp"
#include "pfds/datasets.hpp"
#include "pfds/diagnostics.hpp"
#include "pfds/linalg.hpp"
#include "pfds/oracle1d.hpp"
#include "pfds/plot.hpp"
#include "pfds/problem.hpp"
#include "pfds/run_io.hpp"
#include "pfds/solver.hpp"
#include "pfds/trajectory.hpp"
