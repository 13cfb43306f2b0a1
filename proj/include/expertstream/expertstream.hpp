#pragma once

// Umbrella header: memory-bounded online prediction with expert advice, the
// privacy toolkit, hard-instance generators and the adaptive-game harness.

#include "expertstream/adversary.hpp"
#include "expertstream/baselines.hpp"
#include "expertstream/csv.hpp"
#include "expertstream/format.hpp"
#include "expertstream/pool.hpp"
#include "expertstream/privacy.hpp"
#include "expertstream/rng.hpp"
#include "expertstream/robust.hpp"
#include "expertstream/runner.hpp"
#include "expertstream/stream.hpp"
#include "expertstream/svg.hpp"
#include "expertstream/types.hpp"
