#pragma once

#include "nestseg/error.hpp"
#include "nestseg/graph.hpp"
#include "nestseg/ordering.hpp"
#include "nestseg/pipeline.hpp"
#include "nestseg/segmentation.hpp"
#include "nestseg/weighting.hpp"
