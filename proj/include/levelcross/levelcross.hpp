#pragma once

#include "levelcross/error.hpp"
#include "levelcross/series.hpp"
#include "levelcross/random.hpp"
#include "levelcross/ingest.hpp"
#include "levelcross/crossing.hpp"
#include "levelcross/resampling.hpp"
#include "levelcross/dfa.hpp"
#include "levelcross/synthetic.hpp"
#include "levelcross/indicators.hpp"
