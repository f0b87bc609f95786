#pragma once

#include "projlie/errors.hpp"
#include "projlie/jet.hpp"
#include "projlie/geometry.hpp"
#include "projlie/quadrature.hpp"
#include "projlie/metrizability.hpp"
#include "projlie/catalog.hpp"
#include "projlie/sampler.hpp"
#include "projlie/dynamics.hpp"
#include "projlie/analysis.hpp"
#include "projlie/config.hpp"
#include "projlie/report.hpp"
#include "projlie/suite.hpp"
