#pragma once

#include "forkimpact/calibration.hpp"
#include "forkimpact/classify.hpp"
#include "forkimpact/config.hpp"
#include "forkimpact/core.hpp"
#include "forkimpact/error.hpp"
#include "forkimpact/log_io.hpp"
#include "forkimpact/pipeline.hpp"
#include "forkimpact/power.hpp"
#include "forkimpact/report.hpp"
#include "forkimpact/segmentation.hpp"
#include "forkimpact/suite.hpp"
#include "forkimpact/synth.hpp"
