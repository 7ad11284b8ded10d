#pragma once

#include "robolog/anomaly.hpp"
#include "robolog/config.hpp"
#include "robolog/dataset.hpp"
#include "robolog/error.hpp"
#include "robolog/experiment.hpp"
#include "robolog/grid.hpp"
#include "robolog/log_io.hpp"
#include "robolog/metrics.hpp"
#include "robolog/models/autoencoder.hpp"
#include "robolog/models/detector.hpp"
#include "robolog/models/logistic.hpp"
#include "robolog/models/svm.hpp"
#include "robolog/planner.hpp"
#include "robolog/simulator.hpp"
#include "robolog/trajectory.hpp"
#include "robolog/commands.hpp"
