#pragma once

#include "ciber/association.hpp"
#include "ciber/bench.hpp"
#include "ciber/classifier.hpp"
#include "ciber/data.hpp"
#include "ciber/discretize.hpp"
#include "ciber/distribution.hpp"
#include "ciber/error.hpp"
#include "ciber/partition.hpp"
#include "ciber/rng.hpp"
#include "ciber/simulate.hpp"
