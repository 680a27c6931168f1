#pragma once

// Umbrella header: uncertain nearest neighbor classification toolkit.

#include "unn/baselines.hpp"
#include "unn/class_distance.hpp"
#include "unn/classifier.hpp"
#include "unn/datagen.hpp"
#include "unn/dataset.hpp"
#include "unn/distance_cdf.hpp"
#include "unn/geometry.hpp"
#include "unn/io.hpp"
#include "unn/manet.hpp"
#include "unn/pdf.hpp"
#include "unn/pivot_index.hpp"
#include "unn/rng.hpp"
