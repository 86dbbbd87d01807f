#pragma once

#include "monosindex/asymptotics.hpp"
#include "monosindex/dataset.hpp"
#include "monosindex/errors.hpp"
#include "monosindex/estimators.hpp"
#include "monosindex/isotonic.hpp"
#include "monosindex/kernel.hpp"
#include "monosindex/model.hpp"
#include "monosindex/rng.hpp"
#include "monosindex/score.hpp"
#include "monosindex/search.hpp"
#include "monosindex/simulation.hpp"
#include "monosindex/spline.hpp"
