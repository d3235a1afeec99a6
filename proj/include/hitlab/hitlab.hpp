#pragma once

#include "hitlab/assumptions.hpp"
#include "hitlab/detect.hpp"
#include "hitlab/error.hpp"
#include "hitlab/gen.hpp"
#include "hitlab/graph.hpp"
#include "hitlab/hitting.hpp"
#include "hitlab/io.hpp"
#include "hitlab/parallel.hpp"
#include "hitlab/quotient.hpp"
#include "hitlab/rng.hpp"
#include "hitlab/theory.hpp"
#include "hitlab/verify.hpp"
#include "hitlab/walker.hpp"
