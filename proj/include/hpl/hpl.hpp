#pragma once

#include "hpl/common.hpp"
#include "hpl/engine.hpp"
#include "hpl/geometry.hpp"
#include "hpl/gf.hpp"
#include "hpl/horace.hpp"
#include "hpl/matrix.hpp"
#include "hpl/monomials.hpp"
#include "hpl/postulation.hpp"
#include "hpl/rng.hpp"
#include "hpl/schemes.hpp"
