#pragma once

// Umbrella header.

#include "qfa/automata.hpp"
#include "qfa/learner.hpp"
#include "qfa/linalg.hpp"
#include "qfa/oracle.hpp"
#include "qfa/serialize.hpp"
#include "qfa/verify.hpp"
