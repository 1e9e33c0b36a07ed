#pragma once

// Umbrella header for the whole library.

#include "fuglab/constructions.hpp"
#include "fuglab/funcalc.hpp"
#include "fuglab/intertwine.hpp"
#include "fuglab/io.hpp"
#include "fuglab/matrix.hpp"
#include "fuglab/report.hpp"
#include "fuglab/spectral.hpp"
#include "fuglab/suite.hpp"
#include "fuglab/version.hpp"
