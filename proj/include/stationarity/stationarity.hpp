#pragma once

#include "stationarity/bootstrap.hpp"
#include "stationarity/deviation.hpp"
#include "stationarity/errors.hpp"
#include "stationarity/identification.hpp"
#include "stationarity/models.hpp"
#include "stationarity/montecarlo.hpp"
#include "stationarity/parallel.hpp"
#include "stationarity/random.hpp"
#include "stationarity/series.hpp"
#include "stationarity/spectral.hpp"
#include "stationarity/var.hpp"
#include "stationarity/version.hpp"
