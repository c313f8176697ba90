#pragma once

#include "mar/burg.hpp"
#include "mar/covariance.hpp"
#include "mar/evaluate.hpp"
#include "mar/forecast.hpp"
#include "mar/lse.hpp"
#include "mar/mardia.hpp"
#include "mar/metrics.hpp"
#include "mar/simulation.hpp"
#include "mar/var.hpp"
#include "mar/vecmar.hpp"
#include "mar/yule_walker.hpp"
