#ifndef NARXSEL_NARXSEL_HPP
#define NARXSEL_NARXSEL_HPP

/** @file
 * Umbrella header: polynomial NARX structure selection with a
 * two-dimensional particle swarm and a genetic-algorithm baseline.
 */

#include "dataset.hpp"
#include "dictionary.hpp"
#include "exhaustive.hpp"
#include "experiment.hpp"
#include "fitness.hpp"
#include "ga.hpp"
#include "metrics.hpp"
#include "oracle.hpp"
#include "random.hpp"
#include "records.hpp"
#include "regression.hpp"
#include "runner.hpp"
#include "search.hpp"
#include "structure.hpp"
#include "summary.hpp"
#include "swarm2d.hpp"
#include "systems.hpp"

#endif
