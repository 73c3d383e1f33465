#pragma once

#include "asfilt/canonical.hpp"
#include "asfilt/error.hpp"
#include "asfilt/filtration.hpp"
#include "asfilt/matrix.hpp"
#include "asfilt/newton_polygon.hpp"
#include "asfilt/oracle.hpp"
#include "asfilt/polynomial.hpp"
#include "asfilt/presentation.hpp"
#include "asfilt/rational.hpp"
#include "asfilt/residue_field.hpp"
#include "asfilt/ring.hpp"
