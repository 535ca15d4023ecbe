#pragma once

// Fast-rate classification with a reject option: abstaining aggregation over
// almost-ERM sets, conversions to committed classifiers on finite-diameter
// classes, the combinatorial and covering machinery behind them, and a
// Monte Carlo rate-experiment harness over exactly computable finite domains.

#include "rejectlab/errors.hpp"
#include "rejectlab/rng.hpp"
#include "rejectlab/domain.hpp"
#include "rejectlab/risk.hpp"
#include "rejectlab/combinatorics.hpp"
#include "rejectlab/erm.hpp"
#include "rejectlab/abstain.hpp"
#include "rejectlab/cover.hpp"
#include "rejectlab/convert.hpp"
#include "rejectlab/checks.hpp"
#include "rejectlab/constructions.hpp"
#include "rejectlab/curves.hpp"
#include "rejectlab/io.hpp"
