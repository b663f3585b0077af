#pragma once

#include "rankgeo/classify.hpp"
#include "rankgeo/codes.hpp"
#include "rankgeo/constructions.hpp"
#include "rankgeo/errors.hpp"
#include "rankgeo/fields.hpp"
#include "rankgeo/io.hpp"
#include "rankgeo/linalg.hpp"
#include "rankgeo/qsystems.hpp"
#include "rankgeo/verify.hpp"
