#pragma once

#include "cvqkd/channel.hpp"
#include "cvqkd/coherent.hpp"
#include "cvqkd/counts.hpp"
#include "cvqkd/eve_states.hpp"
#include "cvqkd/fock.hpp"
#include "cvqkd/gaussian.hpp"
#include "cvqkd/montecarlo.hpp"
#include "cvqkd/mutual_info.hpp"
#include "cvqkd/parallel.hpp"
#include "cvqkd/poisson.hpp"
#include "cvqkd/quadrature.hpp"
#include "cvqkd/rates.hpp"
#include "cvqkd/truncation.hpp"
#include "cvqkd/version.hpp"
