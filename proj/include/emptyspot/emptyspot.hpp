#pragma once

#include "emptyspot/clustering.hpp"
#include "emptyspot/cooccurrence.hpp"
#include "emptyspot/error.hpp"
#include "emptyspot/evaluation.hpp"
#include "emptyspot/graph.hpp"
#include "emptyspot/interaction.hpp"
#include "emptyspot/io.hpp"
#include "emptyspot/plot.hpp"
#include "emptyspot/predictor.hpp"
#include "emptyspot/rng.hpp"
#include "emptyspot/settings.hpp"
