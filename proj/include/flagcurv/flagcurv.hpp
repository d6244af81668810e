#pragma once

#include "flagcurv/algebra.hpp"
#include "flagcurv/berwald.hpp"
#include "flagcurv/curvature.hpp"
#include "flagcurv/errors.hpp"
#include "flagcurv/finsler.hpp"
#include "flagcurv/metrics.hpp"
#include "flagcurv/riemann.hpp"
#include "flagcurv/sampling.hpp"
#include "flagcurv/scan.hpp"
#include "flagcurv/types.hpp"
