#pragma once

#include "lrb/anharmonic.hpp"
#include "lrb/clustering.hpp"
#include "lrb/error.hpp"
#include "lrb/focksim.hpp"
#include "lrb/fourier.hpp"
#include "lrb/genbounds.hpp"
#include "lrb/kernels.hpp"
#include "lrb/lattice_sums.hpp"
#include "lrb/lightcone.hpp"
#include "lrb/parallel.hpp"
#include "lrb/quadrature.hpp"
#include "lrb/torus.hpp"
#include "lrb/weyl.hpp"
