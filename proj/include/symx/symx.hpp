#pragma once

#include "border.hpp"
#include "decompose.hpp"
#include "errors.hpp"
#include "genpoly.hpp"
#include "json_io.hpp"
#include "lm.hpp"
#include "matrix.hpp"
#include "multi_index.hpp"
#include "normal_form.hpp"
#include "poly.hpp"
#include "rng.hpp"
#include "roots.hpp"
#include "scalar.hpp"
#include "tensor.hpp"
#include "vandermonde.hpp"
#include "variety.hpp"
#include "version.hpp"
