#pragma once

#include "spherecode/bounds.hpp"
#include "spherecode/closed_forms.hpp"
#include "spherecode/configuration.hpp"
#include "spherecode/errors.hpp"
#include "spherecode/geometry.hpp"
#include "spherecode/io.hpp"
#include "spherecode/labeled_features.hpp"
#include "spherecode/manifold.hpp"
#include "spherecode/metrics.hpp"
#include "spherecode/min_norm.hpp"
#include "spherecode/rng.hpp"
#include "spherecode/solver.hpp"
#include "spherecode/ufm.hpp"
