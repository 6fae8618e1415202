#pragma once

#include "bernoulli.hpp"
#include "common.hpp"
#include "config.hpp"
#include "csv.hpp"
#include "fourier.hpp"
#include "frame.hpp"
#include "ifs.hpp"
#include "linalg.hpp"
#include "measure.hpp"
#include "presets.hpp"
#include "report.hpp"
#include "spectrum.hpp"
