#pragma once

// Exact-arithmetic toolkit for certifying non-freeness of the two-parabolic
// groups generated by [1 1; 0 1] and [1 0; a 1] at rational a: orbit-test
// search with verified certificates, congruence obstructions, Pell-equation
// solution families, and the explicit families accumulating at 3.

#include "certificate_io.hpp"
#include "congruence.hpp"
#include "exact.hpp"
#include "families.hpp"
#include "mat2.hpp"
#include "orbit.hpp"
#include "pell.hpp"
#include "word.hpp"
