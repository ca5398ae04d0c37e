#pragma once

#include "errors.hpp"
#include "rational.hpp"
#include "monomial.hpp"
#include "super_polynomial.hpp"
#include "sparse_matrix.hpp"
#include "algebra.hpp"
#include "cochain.hpp"
#include "complex.hpp"
#include "cache.hpp"
#include "cohomology.hpp"
#include "checks.hpp"
