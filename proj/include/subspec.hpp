#ifndef SUBSPEC_HPP
#define SUBSPEC_HPP

#include "subspec/linalg.hpp"
#include "subspec/spectra.hpp"
#include "subspec/rng.hpp"
#include "subspec/sampling.hpp"
#include "subspec/ensembles.hpp"
#include "subspec/parallel.hpp"
#include "subspec/oracle.hpp"
#include "subspec/montecarlo.hpp"
#include "subspec/walk.hpp"
#include "subspec/illustration.hpp"

#endif  // SUBSPEC_HPP
