#pragma once

#include "relaynet/errors.hpp"
#include "relaynet/metrics.hpp"
#include "relaynet/model.hpp"
#include "relaynet/optimizer.hpp"
#include "relaynet/quadrature.hpp"
#include "relaynet/rng.hpp"
#include "relaynet/simulator.hpp"
