#pragma once

#include "noisy_mds/alignment.hpp"
#include "noisy_mds/bootstrap.hpp"
#include "noisy_mds/error.hpp"
#include "noisy_mds/evaluation.hpp"
#include "noisy_mds/inference.hpp"
#include "noisy_mds/io.hpp"
#include "noisy_mds/linalg.hpp"
#include "noisy_mds/mds.hpp"
#include "noisy_mds/noise.hpp"
#include "noisy_mds/parallel.hpp"
#include "noisy_mds/rng.hpp"
