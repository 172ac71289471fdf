#pragma once

#include "biwave/check.hpp"
#include "biwave/config.hpp"
#include "biwave/diagnostics.hpp"
#include "biwave/errors.hpp"
#include "biwave/field.hpp"
#include "biwave/initial_data.hpp"
#include "biwave/mesh.hpp"
#include "biwave/operators.hpp"
#include "biwave/output.hpp"
#include "biwave/run.hpp"
#include "biwave/scheme.hpp"
#include "biwave/scheme_types.hpp"
#include "biwave/solver.hpp"
#include "biwave/stepper.hpp"
#include "biwave/vec3.hpp"
#include "biwave/verification.hpp"
