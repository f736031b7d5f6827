#pragma once

#include "epictrl/campaign.hpp"
#include "epictrl/control.hpp"
#include "epictrl/equilibria.hpp"
#include "epictrl/error.hpp"
#include "epictrl/integrate.hpp"
#include "epictrl/model.hpp"
#include "epictrl/report.hpp"
#include "epictrl/runner.hpp"
#include "epictrl/scenario.hpp"
#include "epictrl/stability.hpp"
