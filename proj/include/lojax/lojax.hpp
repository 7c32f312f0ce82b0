#pragma once

// Umbrella header: exact polynomial algebra, standard bases, Milnor numbers,
// characteristic polynomials, gradient-inequality exponents, and unfoldings.

#include "lojax/basis.hpp"
#include "lojax/charpoly.hpp"
#include "lojax/errors.hpp"
#include "lojax/exponent.hpp"
#include "lojax/family.hpp"
#include "lojax/fibres.hpp"
#include "lojax/milnor.hpp"
#include "lojax/parse.hpp"
#include "lojax/polynomial.hpp"
#include "lojax/report.hpp"

namespace lojax {
inline constexpr const char* kVersion = "0.1.0";
}
