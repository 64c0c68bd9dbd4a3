#pragma once

#include "sbs/detector.hpp"
#include "sbs/error.hpp"
#include "sbs/generators.hpp"
#include "sbs/info.hpp"
#include "sbs/pointer.hpp"
#include "sbs/rng.hpp"
#include "sbs/state.hpp"
