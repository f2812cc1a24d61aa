#pragma once

#include "renew/baseline.hpp"
#include "renew/contingency.hpp"
#include "renew/csv_schema.hpp"
#include "renew/dynamics.hpp"
#include "renew/env.hpp"
#include "renew/env_io.hpp"
#include "renew/error.hpp"
#include "renew/fields.hpp"
#include "renew/geometry.hpp"
#include "renew/homotopy.hpp"
#include "renew/io.hpp"
#include "renew/mesh.hpp"
#include "renew/padding.hpp"
#include "renew/planner.hpp"
#include "renew/predicates.hpp"
#include "renew/scenarios.hpp"
#include "renew/stats.hpp"
