#pragma once

#include "qineq/error.hpp"
#include "qineq/quaternion.hpp"
#include "qineq/qlinalg.hpp"
#include "qineq/random.hpp"
#include "qineq/report.hpp"
#include "qineq/spectral.hpp"
#include "qineq/funcalc.hpp"
#include "qineq/inequalities.hpp"
#include "qineq/io.hpp"
#include "qineq/campaign.hpp"
